import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.thermo import stress
from hofflab.errors import NormalizationError
from hofflab.solver.flow import material_antiderivative
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.types import FrozenModel

SLACK = 0.05


class DtInvSigmaCheck(FrozenModel):
    max_abs: float
    bound: float
    passed: bool
    mass: float
    energy: float
    density_envelope: float
    density_envelope_respected: bool


def dtinv_sigma_check(
    traj: Trajectory, params: GasParams, momentum_tol: float = 1e-8
) -> DtInvSigmaCheck:
    """
    Bound the particle-path integral of the stress,

        |D_t⁻¹σ| ≤ 2√(2𝓜𝓔) + T(γ+1)𝓔,

    with 𝓜, 𝓔 the run's mass and initial energy, and check the density
    envelope ρ̃ ≤ ρ̄₀·exp(max|D_t⁻¹σ|/μ) that follows from it.

    Raises:
        NormalizationError: the mean velocity Σρ₀ũ/Σρ₀ exceeds `momentum_tol`.
    """
    grid = traj.grid
    rho0 = traj.rho0
    initial = traj.snapshots[0]
    mass = float(np.sum(rho0) * grid.dx)
    mean_velocity = float(np.sum(rho0 * initial.u) * grid.dx) / mass
    if abs(mean_velocity) > momentum_tol:
        raise NormalizationError(
            f"mean velocity {mean_velocity!r} is not zero; "
            "normalize the data with a Galilean boost first",
            mean_velocity=mean_velocity,
            tolerance=momentum_tol,
        )
    energy = float(
        np.sum(rho0 * (0.5 * initial.u**2 + params.cv * initial.theta)) * grid.dx
    )

    dtinv = material_antiderivative(
        traj, lambda s: stress(s.rho, s.u, s.theta, s.rho0, params, grid)
    )
    max_abs = float(np.max(np.abs(dtinv)))
    bound = 2 * np.sqrt(2 * mass * energy) + traj.t_final * (params.gamma + 1) * energy
    envelope = float(np.max(rho0)) * float(np.exp(max_abs / params.mu))
    return DtInvSigmaCheck(
        max_abs=max_abs,
        bound=float(bound),
        passed=max_abs <= bound * (1 + SLACK),
        mass=mass,
        energy=energy,
        density_envelope=envelope,
        density_envelope_respected=float(np.max(traj.stack("rho"))) <= envelope * 1.01,
    )
