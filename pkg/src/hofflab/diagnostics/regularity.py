import numpy as np

from hofflab.core.gas import GasParams
from hofflab.diagnostics.measures import space_derivative, space_integral, time_integral
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.types import FrozenModel


class WeightedRegularity(FrozenModel):
    """
    κ-weighted derivative norms of the conductive regime. All vanish for
    κ = 0. `initial_D0` is κ^α∫(∂xθ₀)² + κ^α∫(∂xρ₀)², which stays bounded in
    κ only for well-prepared data.
    """

    alpha: float
    sup_kalpha_int_dxtheta_sq: float = 0.0
    sup_kalpha_int_dxrho_sq: float = 0.0
    kalpha_m1_int_int_dx_kappa_dxtheta_sq: float = 0.0
    sup_kappa_int_dxtheta_sq: float = 0.0
    sup_kappa_sup_dxrho_sq: float = 0.0
    sup_kappa_sup_dxtheta_sq: float = 0.0
    initial_D0: float = 0.0


def weighted_regularity(
    traj: Trajectory, params: GasParams, alpha: float = 0.5
) -> WeightedRegularity:
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    kappa = params.kappa
    if kappa == 0:
        return WeightedRegularity(alpha=alpha)

    grid = traj.grid
    rho = traj.stack("rho")
    theta = traj.stack("theta")
    v = traj.rho0 / rho
    dx_theta = space_derivative(theta, v, grid)
    dx_rho = space_derivative(rho, v, grid)
    dx_kappa_dx_theta = kappa * space_derivative(dx_theta, v, grid)

    int_dxtheta_sq = space_integral(dx_theta**2, v, grid)
    int_dxrho_sq = space_integral(dx_rho**2, v, grid)
    k_alpha = kappa**alpha

    return WeightedRegularity(
        alpha=alpha,
        sup_kalpha_int_dxtheta_sq=k_alpha * float(np.max(int_dxtheta_sq)),
        sup_kalpha_int_dxrho_sq=k_alpha * float(np.max(int_dxrho_sq)),
        kalpha_m1_int_int_dx_kappa_dxtheta_sq=kappa ** (alpha - 1)
        * time_integral(space_integral(dx_kappa_dx_theta**2, v, grid), traj.times),
        sup_kappa_int_dxtheta_sq=kappa * float(np.max(int_dxtheta_sq)),
        sup_kappa_sup_dxrho_sq=kappa * float(np.max(dx_rho**2)),
        sup_kappa_sup_dxtheta_sq=kappa * float(np.max(dx_theta**2)),
        initial_D0=k_alpha * float(int_dxtheta_sq[0] + int_dxrho_sq[0]),
    )
