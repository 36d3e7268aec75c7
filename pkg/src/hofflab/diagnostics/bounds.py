import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.thermo import stress
from hofflab.diagnostics.measures import l2_norm, space_derivative
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.types import FloatSeries, FrozenModel


class BoundsReport(FrozenModel):
    rho_min: FloatSeries
    rho_max: FloatSeries
    theta_min: FloatSeries
    theta_max: FloatSeries
    global_rho_min: float
    global_rho_max: float
    global_theta_min: float
    global_theta_max: float


def bounds_report(traj: Trajectory) -> BoundsReport:
    """Per-snapshot and global extrema of ρ̃ and θ̃."""
    rho = traj.stack("rho")
    theta = traj.stack("theta")
    return BoundsReport(
        rho_min=np.min(rho, axis=-1),
        rho_max=np.max(rho, axis=-1),
        theta_min=np.min(theta, axis=-1),
        theta_max=np.max(theta, axis=-1),
        global_rho_min=float(np.min(rho)),
        global_rho_max=float(np.max(rho)),
        global_theta_min=float(np.min(theta)),
        global_theta_max=float(np.max(theta)),
    )


class GagliardoNirenbergCheck(FrozenModel):
    sup_sigma_sq: FloatSeries
    bound: FloatSeries
    min_margin: float
    passed: bool


def gagliardo_nirenberg_check(
    traj: Trajectory, params: GasParams, rtol: float = 1e-6
) -> GagliardoNirenbergCheck:
    """‖σ‖∞² ≤ ‖σ‖₂² + 2‖σ‖₂‖∂xσ‖₂ at every snapshot."""
    grid = traj.grid
    rho = traj.stack("rho")
    v = traj.rho0 / rho
    sigma = stress(rho, traj.stack("u"), traj.stack("theta"), traj.rho0, params, grid)
    sup_sq = np.max(sigma**2, axis=-1)
    norm = l2_norm(sigma, v, grid)
    dx_norm = l2_norm(space_derivative(sigma, v, grid), v, grid)
    bound = norm**2 + 2 * norm * dx_norm
    return GagliardoNirenbergCheck(
        sup_sigma_sq=sup_sq,
        bound=bound,
        min_margin=float(np.min(bound - sup_sq)),
        passed=bool(np.all(sup_sq <= bound * (1 + rtol))),
    )
