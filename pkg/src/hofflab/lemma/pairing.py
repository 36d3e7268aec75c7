"""
Pair the comparison lemma with a simulated run.

The stress functional A₂ of a run obeys dA₂/dt ≤ DA₂ + κ²δ(t)Φ(A₂) with
δ(t) = ∫(∂xθ)²/θ² dX and Φ(y) = c₁(θ̄₀ + c₂y)²exp(c₃√y). The coefficients
c₁, c₂, c₃ are evaluated from the run's measured sup ρ and θ̄₀. D is fitted
on the first half of the run and the bound is checked on the second half.
"""

import math
from typing import Callable, Optional

import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.operators import deriv
from hofflab.diagnostics.hoff import hoff_energies
from hofflab.diagnostics.report import DiagnosticsReport
from hofflab.lemma.bound import BoundProblem, compute_threshold, tau_bar_for
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.logging import get_logger
from hofflab.utilities.types import FloatSeries, FrozenModel

logger = get_logger(__name__)

PhiFunction = Callable[[float], float]


class StressPhiCoefficients(FrozenModel):
    c1: float
    c2: float
    c3: float
    theta_bar0: float


def stress_phi_coefficients(
    params: GasParams, rho_bar: float, theta_bar0: float, T: float
) -> StressPhiCoefficients:
    ratio = max(2.0, rho_bar / params.mu)
    return StressPhiCoefficients(
        c1=2 * (params.gamma - 1) ** 2 * rho_bar / params.mu,
        c2=ratio / (params.mu * rho_bar * params.cv),
        c3=2 * params.R * math.sqrt(ratio) * math.sqrt(T) / (params.mu * params.cv),
        theta_bar0=theta_bar0,
    )


def stress_phi(coefficients: StressPhiCoefficients):
    """Φ(y) = c₁(θ̄₀ + c₂y)²·exp(c₃√y)."""
    c = coefficients

    def phi(y: float) -> float:
        y = max(float(y), 0.0)
        # exponent clipped below the float overflow threshold
        growth = math.exp(min(c.c3 * math.sqrt(y), 700.0))
        return c.c1 * (c.theta_bar0 + c.c2 * y) ** 2 * growth

    return phi


def stress_growth_constant(params: GasParams, rho_bar: float, energy: float) -> float:
    """
    The symbolic linear growth rate of the A₂ inequality,
    1 + 2(γ-1)²ρ̄𝓔/μ·max(1, ρ̄/μ). Informational only: it overflows the
    e^{DT} reduction for realistic data.
    """
    return 1.0 + 2 * (params.gamma - 1) ** 2 * rho_bar * energy / params.mu * max(
        1.0, rho_bar / params.mu
    )


def conduction_intensity(traj: Trajectory) -> np.ndarray:
    """δ(t) = ∫(∂xθ)²/θ² dX = Σ(Dθ̃)²/(vθ̃²)·dx per snapshot."""
    grid = traj.grid
    theta = traj.stack("theta")
    v = traj.specific_volumes()
    return np.sum(deriv(theta, grid) ** 2 / (v * theta**2), axis=-1) * grid.dx


class PairingResult(FrozenModel):
    kappa: float
    kappa_eff: float
    D: float
    D_measured: float
    fit_window_end: float
    tau0: float
    sup_A2: float
    tau_bar: float
    margin: float
    passed: bool
    int_delta: float
    coefficients: StressPhiCoefficients
    delta: FloatSeries


def _growth_rates(
    A2: np.ndarray, times: np.ndarray, delta: np.ndarray, phi: PhiFunction, kappa_eff: float
) -> np.ndarray:
    """Per-increment (ΔA₂/Δt - κ_eff·δ·Φ(A₂))/A₂, the rate D must dominate."""
    steps = np.diff(times)
    forcing = kappa_eff * delta[:-1] * np.array([phi(a) for a in A2[:-1]])
    return (np.diff(A2) / steps - forcing) / A2[:-1]


def _split_index(times: np.ndarray) -> int:
    """Snapshot closest to mid-run, leaving an increment on each side."""
    middle = int(np.argmin(np.abs(times - 0.5 * (times[0] + times[-1]))))
    return min(max(middle, 1), len(times) - 2)


def pair_with_simulation(
    traj: Trajectory,
    params: Optional[GasParams] = None,
    report: Optional[DiagnosticsReport] = None,
    D: Optional[float] = None,
    phi: Optional[PhiFunction] = None,
) -> PairingResult:
    """
    Check the run's A₂(t) against the lemma bound τ̄ built with κ_eff = κ²,
    the measured δ and Φ.

    The growth rate D is fitted on the first half of the run and the bound
    is checked on the second half, started from A₂ at the split. `D` and
    `phi` replace the fitted rate and the stress Φ. `D_measured` is the
    smallest rate consistent with every increment of the run and is not
    used by the check. `margin` is 1 - sup A₂/τ̄ over the checked half.

    Raises:
        InsufficientSnapshots: fewer than 3 snapshots.
    """
    params = params or traj.params
    times = traj.times
    A2 = report.A2 if report is not None else hoff_energies(traj, params).A2
    delta = conduction_intensity(traj)

    rho_bar = float(np.max(traj.stack("rho")))
    theta_bar0 = float(np.max(traj.snapshots[0].theta))
    coefficients = stress_phi_coefficients(params, rho_bar, theta_bar0, traj.t_final)
    phi = phi or stress_phi(coefficients)
    kappa_eff = params.kappa**2

    rates = _growth_rates(A2, times, delta, phi, kappa_eff)
    split = _split_index(times)
    D_measured = max(0.0, float(np.max(rates)))
    if D is None:
        D = max(0.0, float(np.max(rates[:split])))

    start = float(times[split])
    checked = A2[split:]
    problem = BoundProblem(
        D=D,
        delta=lambda t: float(np.interp(t + start, times, delta)),
        delta_grid=times[split:] - start,
        Phi=phi,
        tau0=float(checked[0]),
        T=float(times[-1]) - start,
    )
    tau_bar = tau_bar_for(problem, kappa_eff, compute_threshold(problem))
    sup_A2 = float(np.max(checked))
    margin = 1.0 - sup_A2 / tau_bar if tau_bar > 0 else -math.inf
    passed = sup_A2 <= tau_bar
    if not passed:
        logger.warning(f"A₂ exceeds the comparison bound for κ={params.kappa!r}")
    return PairingResult(
        kappa=params.kappa,
        kappa_eff=kappa_eff,
        D=problem.D,
        D_measured=D_measured,
        fit_window_end=start,
        tau0=problem.tau0,
        sup_A2=sup_A2,
        tau_bar=tau_bar,
        margin=margin,
        passed=passed,
        int_delta=problem.int_delta(),
        coefficients=coefficients,
        delta=delta,
    )
