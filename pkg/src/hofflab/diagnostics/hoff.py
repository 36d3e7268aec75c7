import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.thermo import stress
from hofflab.diagnostics.measures import (
    Measure,
    cumulative_time_integral,
    interior_times,
    space_derivative,
    space_integral,
    time_derivative,
    time_integral,
    time_weight,
)
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.types import FloatSeries, FrozenModel


class Hoff1(FrozenModel):
    """Terms of the first Hoff energy, unweighted in time."""

    sup_int_sigma_sq: float
    sup_int_dxu_sq: float
    kappa_int_int_dxtheta_sq: float
    int_int_dxsigma_sq: float
    int_int_dtu_sq: float
    int_sup_sigma_sq: float
    int_sup_dxu_sq: float
    sup_u_sq: float


class Hoff2(FrozenModel):
    """Terms of the second Hoff energy, weighted by w(t) = min(1, t)."""

    sup_w_int_dxsigma_sq: float
    sup_w_int_kappa_dxtheta_sq: float
    int_w_int_dtsigma_sq: float
    int_w_int_dx_kappa_dxtheta_sq: float


class HoffEnergies(FrozenModel):
    measure: Measure
    hoff1: Hoff1
    hoff2: Hoff2
    A1: FloatSeries
    A2: FloatSeries


def hoff_energies(
    traj: Trajectory,
    params: GasParams,
    measure: Measure = "eulerian",
) -> HoffEnergies:
    """
    Evaluate both Hoff energies and the functionals

        A₁(t) = ∫σ² + μ∫₀ᵗ∫(∂xσ)²/ρ,   A₂(t) = A₁(t) + ∫₀ᵗA₁.

    ∂tu is taken from the momentum equation, ∂tu = ∂xσ/ρ - u∂xu, and
    ∂tσ = D_tσ - u∂xσ with D_tσ the per-label time derivative, so its
    weighted integral runs over the interior snapshots only. With
    `measure="label"` integrals are Σ·dx over labels and ∂x is the label
    derivative.

    Raises:
        InsufficientSnapshots: fewer than 3 snapshots.
    """
    grid = traj.grid
    times = traj.times
    rho0 = traj.rho0
    rho = traj.stack("rho")
    u = traj.stack("u")
    theta = traj.stack("theta")
    v = rho0 / rho

    def integral(g: np.ndarray) -> np.ndarray:
        return space_integral(g, v, grid, measure)

    def dx(g: np.ndarray) -> np.ndarray:
        return space_derivative(g, v, grid, measure)

    sigma = stress(rho, u, theta, rho0, params, grid)
    dx_u = dx(u)
    dx_sigma = dx(sigma)
    dx_theta = dx(theta)
    dt_u = dx_sigma / rho - u * dx_u
    dt_sigma = time_derivative(sigma, times) - (u * dx_sigma)[1:-1]
    inner = interior_times(times)
    dx_kappa_dx_theta = params.kappa * dx(dx_theta)
    w = time_weight(times)

    int_sigma_sq = integral(sigma**2)
    int_dxsigma_sq = integral(dx_sigma**2)
    int_kappa_dxtheta_sq = params.kappa * integral(dx_theta**2)

    hoff1 = Hoff1(
        sup_int_sigma_sq=float(np.max(int_sigma_sq)),
        sup_int_dxu_sq=float(np.max(integral(dx_u**2))),
        kappa_int_int_dxtheta_sq=time_integral(int_kappa_dxtheta_sq, times),
        int_int_dxsigma_sq=time_integral(int_dxsigma_sq, times),
        int_int_dtu_sq=time_integral(integral(dt_u**2), times),
        int_sup_sigma_sq=time_integral(np.max(sigma**2, axis=-1), times),
        int_sup_dxu_sq=time_integral(np.max(dx_u**2, axis=-1), times),
        sup_u_sq=float(np.max(u**2)),
    )
    hoff2 = Hoff2(
        sup_w_int_dxsigma_sq=float(np.max(w * int_dxsigma_sq)),
        sup_w_int_kappa_dxtheta_sq=float(np.max(w * int_kappa_dxtheta_sq)),
        int_w_int_dtsigma_sq=time_integral(
            w[1:-1] * space_integral(dt_sigma**2, v[1:-1], grid, measure), inner
        ),
        int_w_int_dx_kappa_dxtheta_sq=time_integral(
            w * integral(dx_kappa_dx_theta**2), times
        ),
    )

    A1 = int_sigma_sq + params.mu * cumulative_time_integral(
        integral(dx_sigma**2 / rho), times
    )
    A2 = A1 + cumulative_time_integral(A1, times)
    return HoffEnergies(measure=measure, hoff1=hoff1, hoff2=hoff2, A1=A1, A2=A2)
