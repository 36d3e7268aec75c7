"""
Session-scoped trajectories shared by the diagnostics, lemma and io tests.
They are small on purpose; convergence studies build their own runs.
"""

import pytest
from hofflab.core.gas import GasParams
from hofflab.solver.config import SolverConfig
from hofflab.solver.integrate import run
from hofflab.solver.trajectory import Trajectory

from .states import constant_fields, smooth_fields

SMOOTH_CONFIG = SolverConfig(dt_initial=1e-3, t_end=0.2, snapshot_every=0.02)


def smooth_run(kappa: float, n: int = 128, config: SolverConfig = SMOOTH_CONFIG) -> Trajectory:
    return run(smooth_fields(n).to_state(), GasParams(mu=1.0, kappa=kappa), config)


@pytest.fixture(scope="session")
def constant_traj() -> Trajectory:
    config = SolverConfig(dt_initial=0.01, t_end=1.0, snapshot_every=0.1)
    return run(constant_fields(64).to_state(), GasParams(mu=1.0, kappa=0.1), config)


@pytest.fixture(scope="session")
def smooth_traj() -> Trajectory:
    return smooth_run(kappa=0.01)


@pytest.fixture(scope="session")
def smooth_traj_no_conduction() -> Trajectory:
    return smooth_run(kappa=0.0)


@pytest.fixture(scope="session")
def dense_traj() -> Trajectory:
    """Every accepted step stored, for identities that need time derivatives."""
    return smooth_run(kappa=0.05, config=SolverConfig(dt_initial=1e-3, t_end=0.05))


@pytest.fixture(scope="session")
def drifting_traj() -> Trajectory:
    """Uniform flow u₀ ≡ 5, which carries net momentum."""
    config = SolverConfig(dt_initial=0.01, t_end=0.1, snapshot_every=0.02)
    return run(constant_fields(16, u=5.0).to_state(), GasParams(mu=1.0), config)
