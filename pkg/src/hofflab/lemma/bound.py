"""
Comparison lemma for dτ/dt ≤ Dτ + κδ(t)Φ(τ).

With Ψ a primitive of 1/Φ normalized by Ψ(τ₀) = 0, every solution with
τ(0) ≤ τ₀ satisfies Ψ(τ(t)) ≤ κ∫₀ᵗδ while D = 0. The threshold κ₀ keeps
κ∫δ strictly below sup Ψ and τ̄ = Ψ⁻¹(κ₀∫δ) bounds all κ < κ₀. For D > 0
the problem is reduced to D = 0 through τ̃ = e^{-Dt}τ, Φ̃(y) = Φ(e^{DT}y),
and the bound is scaled back by e^{DT}.
"""

import math
from typing import Callable, Optional

import numpy as np
import pandas as pd
from pydantic import Field, field_validator
from scipy.integrate import quad, solve_ivp, trapezoid
from scipy.optimize import bisect

from hofflab.errors import IntegrationBlowup, NotBoundable, QuadratureFailure
from hofflab.utilities.logging import get_logger
from hofflab.utilities.types import FloatSeries, FrozenModel

logger = get_logger(__name__)

KAPPA0_MARGIN = 1e-3
PSI_RTOL = 1e-10
PLATEAU_RTOL = 1e-12
MAX_DECADES = 40
BOUND_RTOL = 1e-6


class BoundProblem(FrozenModel):
    D: float = 0.0
    delta: Callable[[float], float]
    delta_grid: FloatSeries = Field(description="Quadrature nodes for ∫₀ᵀδ.")
    Phi: Callable[[float], float]
    tau0: float = Field(ge=0)
    T: float = Field(gt=0)

    @field_validator("D")
    @classmethod
    def _nonnegative_growth(cls, v: float) -> float:
        # a negative growth rate only helps; the lemma is stated for D ≥ 0
        return max(v, 0.0)

    @property
    def scale(self) -> float:
        """e^{DT}, the factor between the reduced and the original bound."""
        return math.exp(self.D * self.T)

    def int_delta(self) -> float:
        values = np.array([self.delta(float(t)) for t in self.delta_grid])
        return float(trapezoid(values, self.delta_grid))

    def reduced(self) -> "BoundProblem":
        """The equivalent D = 0 problem with Φ̃(y) = Φ(e^{DT}y)."""
        if self.D == 0:
            return self
        scale = self.scale
        phi = self.Phi
        return self.model_copy(update={"D": 0.0, "Phi": lambda y: phi(scale * y)})


class BoundResult(FrozenModel):
    kappa0: float
    tau_bar: float
    psi_tau0: float = 0.0
    int_delta: float
    sup_psi: float
    scale: float = 1.0
    ladder_y: FloatSeries
    ladder_psi: FloatSeries


def _checked_phi(problem: BoundProblem) -> Callable[[float], float]:
    def inverse_phi(z: float) -> float:
        value = float(problem.Phi(z))
        if not value > 0:
            raise QuadratureFailure(
                f"Φ({z!r}) = {value!r} is not positive", y=z, phi=value
            )
        return 1.0 / value

    return inverse_phi


def _segment(problem: BoundProblem, a: float, b: float) -> float:
    if a == b:
        return 0.0
    value, _ = quad(
        _checked_phi(problem), a, b, epsabs=0.0, epsrel=PSI_RTOL, limit=200
    )
    if not math.isfinite(value):
        raise QuadratureFailure(f"∫dz/Φ over [{a!r}, {b!r}] is not finite")
    return value


def psi(problem: BoundProblem, y: float) -> float:
    """
    Ψ(y) = ∫_{τ₀}^{y} dz/Φ(z), integrated decade by decade.

    Raises:
        QuadratureFailure: Φ vanishes, is negative or NaN on the range.
    """
    if y >= problem.tau0:
        lo, hi, sign = problem.tau0, y, 1.0
    else:
        lo, hi, sign = y, problem.tau0, -1.0
    total = 0.0
    a = lo
    while a < hi:
        b = min(hi, max(10.0 * a, a + 1.0))
        total += _segment(problem, a, b)
        a = b
    return sign * total


def _ladder(problem: BoundProblem) -> tuple[list[float], list[float], float]:
    """Ψ on a decade ladder from τ₀; returns (y, Ψ(y), sup Ψ)."""
    y0 = problem.tau0 if problem.tau0 > 0 else 1.0
    ys = [problem.tau0]
    values = [0.0]
    if y0 != problem.tau0:
        ys.append(y0)
        values.append(_segment(problem, problem.tau0, y0))
    for _ in range(MAX_DECADES):
        a = ys[-1]
        b = 10.0 * a
        increment = _segment(problem, a, b)
        if increment < 0:
            raise QuadratureFailure("Ψ decreased on the ladder")
        ys.append(b)
        values.append(values[-1] + increment)
        if increment < PLATEAU_RTOL * max(1.0, abs(values[-1])):
            return ys, values, values[-1]
    return ys, values, math.inf


def _bracket(
    problem: BoundProblem, target: float, ys: list[float], values: list[float]
) -> tuple[float, float, float]:
    """A rung [lo, hi] with Ψ(lo) = base < target ≤ Ψ(hi)."""
    for k in range(1, len(values)):
        if values[k] >= target:
            return ys[k - 1], ys[k], values[k - 1]
    lo, base = ys[-1], values[-1]
    hi = 10.0 * lo
    segment = _segment(problem, lo, hi)
    while base + segment < target:
        lo, base = hi, base + segment
        hi = 10.0 * lo
        segment = _segment(problem, lo, hi)
    return lo, hi, base


def _invert(
    problem: BoundProblem, target: float, ys: list[float], values: list[float]
) -> float:
    """Ψ⁻¹(target) by bisection."""
    if target <= 0:
        return problem.tau0
    lo, hi, base = _bracket(problem, target, ys, values)
    return bisect(
        lambda y: base + _segment(problem, lo, y) - target, lo, hi, rtol=PSI_RTOL
    )


def compute_threshold(problem: BoundProblem) -> BoundResult:
    """
    κ₀ = (sup Ψ - Ψ(τ₀))(1 - 1e-3)/∫δ and τ̄ = Ψ⁻¹(Ψ(τ₀) + κ₀∫δ).

    κ₀ is infinite when sup Ψ is (or when ∫δ = 0); τ̄ is then only available
    per κ through `tau_bar_for`.

    Raises:
        NotBoundable: Ψ(τ₀) already reaches sup Ψ.
        QuadratureFailure: Φ is not positive on the explored range.
    """
    reduced = problem.reduced()
    ys, values, sup_psi = _ladder(reduced)
    int_delta = problem.int_delta()

    if math.isfinite(sup_psi) and sup_psi <= 0:
        raise NotBoundable(
            f"Ψ(τ₀) = 0 already reaches sup Ψ = {sup_psi!r}", sup_psi=sup_psi
        )
    if not math.isfinite(sup_psi) or int_delta <= 0:
        kappa0 = math.inf
        tau_bar = math.inf
    else:
        kappa0 = sup_psi * (1 - KAPPA0_MARGIN) / int_delta
        tau_bar = problem.scale * _invert(reduced, kappa0 * int_delta, ys, values)

    logger.debug(f"threshold: κ₀={kappa0!r} τ̄={tau_bar!r} sup Ψ={sup_psi!r}")
    return BoundResult(
        kappa0=kappa0,
        tau_bar=tau_bar,
        int_delta=int_delta,
        sup_psi=sup_psi,
        scale=problem.scale,
        ladder_y=np.array(ys),
        ladder_psi=np.array(values),
    )


def tau_bar_for(
    problem: BoundProblem, kappa: float, result: Optional[BoundResult] = None
) -> float:
    """The bound e^{DT}·Ψ̃⁻¹(κ∫δ) for one κ; infinite once κ∫δ ≥ sup Ψ."""
    result = result or compute_threshold(problem)
    target = kappa * result.int_delta
    if target >= result.sup_psi:
        return math.inf
    reduced = problem.reduced()
    return result.scale * _invert(
        reduced, target, list(result.ladder_y), list(result.ladder_psi)
    )


class BoundCheck(FrozenModel):
    kappa: float
    sup_tau: float
    tau_bar: float
    tau_bar_kappa: float
    below_kappa0: bool
    passed: Optional[bool] = None
    blowup_time: Optional[float] = None
    error: Optional[dict] = None


class BoundVerification(FrozenModel):
    result: BoundResult
    checks: list[BoundCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.below_kappa0)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.model_dump() for c in self.checks])


def _integrate(problem: BoundProblem, kappa: float, ceiling: float):
    def rhs(t: float, tau: np.ndarray) -> np.ndarray:
        return problem.D * tau + kappa * problem.delta(t) * problem.Phi(tau[0])

    def escaped(t: float, tau: np.ndarray) -> float:
        return tau[0] - ceiling

    escaped.terminal = True
    escaped.direction = 1
    return solve_ivp(
        rhs,
        (0.0, problem.T),
        [problem.tau0],
        method="RK45",
        rtol=1e-9,
        atol=1e-12,
        events=escaped,
    )


def verify_bound(
    problem: BoundProblem,
    kappa_grid: list[float],
    result: Optional[BoundResult] = None,
) -> BoundVerification:
    """
    Integrate the extremal equation τ' = Dτ + κδΦ(τ) for each κ and compare
    sup τ with the bound. Rows with κ ≥ κ₀ are informational; escapes past
    1e6·max(τ̄, τ₀, 1) or solver breakdown are recorded as blow-up.
    """
    result = result or compute_threshold(problem)
    checks = []
    for kappa in kappa_grid:
        tau_bar_kappa = tau_bar_for(problem, kappa, result)
        reference = max(
            x
            for x in (result.tau_bar, tau_bar_kappa, problem.tau0, 1.0)
            if math.isfinite(x)
        )
        solution = _integrate(problem, kappa, 1e6 * reference)

        blowup_time = None
        if solution.t_events[0].size:
            blowup_time = float(solution.t_events[0][0])
        elif solution.status == -1:
            blowup_time = float(solution.t[-1])
        error = None
        if blowup_time is not None:
            blowup = IntegrationBlowup(
                f"τ escaped at t={blowup_time!r} for κ={kappa!r}",
                kappa=kappa,
                t=blowup_time,
            )
            logger.info(blowup.message)
            error = blowup.to_record()

        sup_tau = float(np.max(solution.y[0])) if blowup_time is None else math.inf
        below = kappa < result.kappa0
        passed = None
        if below:
            passed = blowup_time is None and sup_tau <= tau_bar_kappa * (1 + BOUND_RTOL)
            if not passed:
                logger.warning(f"bound violated for κ={kappa!r}: sup τ={sup_tau!r}")
        checks.append(
            BoundCheck(
                kappa=kappa,
                sup_tau=sup_tau,
                tau_bar=result.tau_bar,
                tau_bar_kappa=tau_bar_kappa,
                below_kappa0=below,
                passed=passed,
                blowup_time=blowup_time,
                error=error,
            )
        )
    return BoundVerification(result=result, checks=checks)
