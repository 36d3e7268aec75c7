"""
Residuals of the stress equation and of the p^{1/γ} identity, evaluated on
the label grid.

Material derivatives D_t = ∂t + u∂x are per-label time derivatives, and an
Eulerian ∂x is D(·)/v with v = ρ₀/ρ̃. Each residual r is reported as its
Eulerian L² norm sqrt(Σ r²·v·dx) at the interior snapshot times
`times[1:-1]`, where centered time differences are available.
"""

from typing import Callable, Optional

import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.grid import Grid
from hofflab.core.operators import deriv
from hofflab.core.thermo import stress
from hofflab.diagnostics.measures import l2_norm, time_derivative
from hofflab.solver.trajectory import Trajectory

StressFunction = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _conduction(
    theta: np.ndarray, v: np.ndarray, params: GasParams, grid: Grid
) -> np.ndarray:
    """∂x(κ∂xθ) in Eulerian form, (κ/v)·D(Dθ̃/v)."""
    return params.kappa * deriv(deriv(theta, grid) / v, grid) / v


def sigma_pde_residual(
    traj: Trajectory,
    params: GasParams,
    sigma_of: Optional[StressFunction] = None,
) -> np.ndarray:
    """
    Residual of D_tσ - μ∂x(∂xσ/ρ) + γσ∂xu + (γ-1)∂x(κ∂xθ) = 0, which reads

        ∂tσ̃ - (μ/v)D(Dσ̃/ρ₀) + γσ̃Dũ/v + (γ-1)(κ/v)D(Dθ̃/v)

    in label variables. `sigma_of(rho, u, theta, rho0)` replaces the stress
    definition (used for negative controls).

    Raises:
        InsufficientSnapshots: fewer than 3 snapshots.
    """
    grid = traj.grid
    rho = traj.stack("rho")
    u = traj.stack("u")
    theta = traj.stack("theta")
    rho0 = traj.rho0
    v = rho0 / rho

    if sigma_of is None:
        sigma = stress(rho, u, theta, rho0, params, grid)
    else:
        sigma = sigma_of(rho, u, theta, rho0)

    spatial = (
        params.gamma * sigma * deriv(u, grid) / v
        + (params.gamma - 1) * _conduction(theta, v, params, grid)
        - params.mu * deriv(deriv(sigma, grid) / rho0, grid) / v
    )
    residual = time_derivative(sigma, traj.times) + spatial[1:-1]
    return l2_norm(residual, v[1:-1], grid)


def pgamma_identity_residual(
    traj: Trajectory, params: GasParams, include_conduction: bool = True
) -> np.ndarray:
    """
    Residual of ∂t(q) + ∂x(qu) = ((γ-1)/γ)[μ(∂xu)² + ∂x(κ∂xθ)]·p^{1/γ-1},
    q = p^{1/γ}.

    Mass conservation turns the left side into ρ·D_t(q/ρ), realized as
    ρ̃·∂t(q̃/ρ̃) along labels. With `include_conduction=False` the κ-term is
    dropped from the right side, which leaves an O(κ) plateau for κ > 0.

    Raises:
        InsufficientSnapshots: fewer than 3 snapshots.
    """
    grid = traj.grid
    gamma = params.gamma
    rho = traj.stack("rho")
    u = traj.stack("u")
    theta = traj.stack("theta")
    v = traj.rho0 / rho

    p = params.R * rho * theta
    q = p ** (1.0 / gamma)
    lhs = rho[1:-1] * time_derivative(q / rho, traj.times)

    source = params.mu * (deriv(u, grid) / v) ** 2
    if include_conduction:
        source = source + _conduction(theta, v, params, grid)
    rhs = (gamma - 1) / gamma * source * p ** (1.0 / gamma - 1.0)
    return l2_norm(lhs - rhs[1:-1], v[1:-1], grid)
