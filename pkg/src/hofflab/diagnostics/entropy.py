import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.operators import deriv
from hofflab.core.thermo import entropy_h
from hofflab.diagnostics.measures import (
    cumulative_time_integral,
    interior_times,
    time_derivative,
)
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.types import FloatSeries, FrozenModel


class EntropyBalance(FrozenModel):
    entropy: FloatSeries
    production_rate: FloatSeries
    production: FloatSeries
    residual_times: FloatSeries
    residual: FloatSeries


def entropy_production_rate(
    traj: Trajectory, params: GasParams, include_conduction: bool = True
) -> np.ndarray:
    """
    ∫[μ(∂xu)²/θ + κ(∂xθ)²/θ²] dX per snapshot, i.e.
    Σ[μ(Dũ)²/(vθ̃) + κ(Dθ̃)²/(vθ̃²)]·dx with v = ρ₀/ρ̃.
    """
    grid = traj.grid
    v = traj.specific_volumes()
    theta = traj.stack("theta")
    du = deriv(traj.stack("u"), grid)
    integrand = params.mu * du**2 / (v * theta)
    if include_conduction and params.kappa > 0:
        dtheta = deriv(theta, grid)
        integrand = integrand + params.kappa * dtheta**2 / (v * theta**2)
    return np.sum(integrand, axis=-1) * grid.dx


def total_entropy(traj: Trajectory, params: GasParams) -> np.ndarray:
    """Σρ₀s̃·dx with s = cv ln θ - R ln ρ."""
    s = params.cv * np.log(traj.stack("theta")) - params.R * np.log(traj.stack("rho"))
    return np.sum(traj.rho0 * s, axis=-1) * traj.grid.dx


def entropy_balance(traj: Trajectory, params: GasParams) -> EntropyBalance:
    """
    Cumulative entropy production and the residual |dS/dt - production rate|
    of the integrated entropy balance. The residual is given at the interior
    snapshot times `residual_times`.

    Raises:
        InsufficientSnapshots: fewer than 3 snapshots.
    """
    entropy = total_entropy(traj, params)
    rate = entropy_production_rate(traj, params)
    residual = np.abs(time_derivative(entropy, traj.times) - rate[1:-1])
    return EntropyBalance(
        entropy=entropy,
        production_rate=rate,
        production=cumulative_time_integral(rate, traj.times),
        residual_times=interior_times(traj.times),
        residual=residual,
    )


class EntropyBudget(FrozenModel):
    """
    Integrated relative-entropy identity

        ∫ρu²/2 + ∫ρ[cv h(θ) + R h(1/ρ)] + ∫₀ᵗ production = same at t = 0

    and the a-priori bound on the total production.
    """

    relative_entropy: FloatSeries
    residual: FloatSeries
    total_production: float
    production_bound: float
    passed: bool


def _sup_h(low: float, high: float) -> float:
    # h is convex, so its sup over an interval sits at an end point
    return max(entropy_h(low), entropy_h(high))


def entropy_budget(traj: Trajectory, params: GasParams, rtol: float = 1e-6) -> EntropyBudget:
    rho0 = traj.rho0
    dx = traj.grid.dx
    u = traj.stack("u")
    theta = traj.stack("theta")
    rho = traj.stack("rho")

    relative = (
        np.sum(
            rho0 * (params.cv * entropy_h(theta) + params.R * entropy_h(1.0 / rho)),
            axis=-1,
        )
        * dx
    )
    kinetic = np.sum(rho0 * 0.5 * u**2, axis=-1) * dx
    production = cumulative_time_integral(
        entropy_production_rate(traj, params), traj.times
    )
    total = kinetic + relative + production
    residual = np.abs(total - total[0])

    initial = traj.snapshots[0]
    mass = float(np.sum(rho0) * dx)
    energy = float(np.sum(rho0 * (0.5 * initial.u**2 + params.cv * initial.theta)) * dx)
    bound = (
        energy
        + params.cv * mass * _sup_h(float(np.min(initial.theta)), float(np.max(initial.theta)))
        + params.R * mass * _sup_h(1.0 / float(np.max(rho0)), 1.0 / float(np.min(rho0)))
    )
    total_production = float(production[-1])
    return EntropyBudget(
        relative_entropy=relative,
        residual=residual,
        total_production=total_production,
        production_bound=bound,
        passed=total_production <= bound * (1 + rtol),
    )
