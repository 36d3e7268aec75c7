"""
The κ → 0 experiment and the initial-data stability probe.

Every run of a sweep is an independent prefect task; the flow gathers the
results in the order of the κ list, so the merged table never depends on
scheduling or on the number of worker threads.
"""

import math
from typing import Literal, Optional

import numpy as np
import pandas as pd
import prefect
from prefect.task_runners import ThreadPoolTaskRunner
from prefect.utilities.annotations import quote
from pydantic import Field, field_validator, model_validator

import hofflab
from hofflab.core.gas import GasParams
from hofflab.core.grid import Grid
from hofflab.core.state import InitialFields
from hofflab.diagnostics.hoff import Hoff1, Hoff2
from hofflab.diagnostics.regularity import WeightedRegularity
from hofflab.diagnostics.report import DiagnosticsReport, compute_report
from hofflab.errors import HoffLabError, NonMonotoneDistances, SweepRunError
from hofflab.io.initial_data import InitialDataSpec
from hofflab.lemma.pairing import PairingResult, pair_with_simulation
from hofflab.solver.config import SolverConfig
from hofflab.solver.integrate import run
from hofflab.solver.trajectory import Trajectory
from hofflab.sweep.distance import DistanceComponents, DistanceNorm, distance_components
from hofflab.sweep.mollifier import bump, phi_prime_l1
from hofflab.sweep.prepare import ENVELOPE_SLACK, PreparationReport, prepare_data
from hofflab.utilities.convergence import log_log_slope
from hofflab.utilities.logging import get_logger
from hofflab.utilities.prefect import create_table_artifact, prefect_flow, prefect_task
from hofflab.utilities.types import FrozenModel

logger = get_logger(__name__)

DEGENERATE_MARKER = "degenerate: zero distances"
STABILITY_THRESHOLDS = {"rho": 1 / 3 - 0.05, "u": 1 - 0.05}


def check_kappa_list(v: list[float]) -> list[float]:
    if not v:
        raise ValueError("kappas must not be empty")
    if any(k < 0 for k in v):
        raise ValueError("kappas must be ≥ 0")
    if any(a <= b for a, b in zip(v, v[1:])):
        raise ValueError("kappas must be strictly decreasing")
    if v[-1] != 0:
        raise ValueError("kappas must end in 0")
    return v


class StabilityConfig(FrozenModel):
    sizes: list[float] = [1e-2, 1e-3, 1e-4]
    kappa: float = Field(default=1e-2, ge=0)
    field: Literal["rho", "u"] = "rho"
    norm: DistanceNorm = "lagrangian_composed"

    @field_validator("sizes")
    @classmethod
    def _validate_sizes(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("the stability probe needs at least one perturbation size")
        if any(size < 0 for size in v):
            raise ValueError("perturbation sizes must be ≥ 0")
        return v


class SweepConfig(FrozenModel):
    kappas: list[float]
    base_initial: InitialDataSpec = InitialDataSpec()
    mollify: bool = Field(
        default=True,
        description="Prepare the data of each run by mollifying at the κ-dependent widths.",
    )
    grid: Grid = Grid(n=256)
    solver: SolverConfig
    gas: GasParams = GasParams(mu=1.0)
    distance_norms: list[DistanceNorm] = [
        "L2L2_rho",
        "L2L2_theta",
        "L2H1_u",
        "lagrangian_composed",
    ]
    alpha: float = Field(default=0.5, gt=0, lt=1)
    stability: Optional[StabilityConfig] = None

    @field_validator("kappas")
    @classmethod
    def _validate_kappas(cls, v: list[float]) -> list[float]:
        return check_kappa_list(v)

    @model_validator(mode="after")
    def _validate_snapshots(self):
        if self.solver.snapshot_every is None:
            raise ValueError(
                "sweeps need solver.snapshot_every so that all runs share snapshot times"
            )
        return self


class SimulationResult(FrozenModel):
    kappa: float
    trajectory: Trajectory
    report: DiagnosticsReport
    pairing: Optional[PairingResult] = None
    preparation: PreparationReport


@prefect_task(task_run_name="simulate-kappa-{kappa}")
def simulate(
    initial: InitialFields,
    kappa: float,
    gas: GasParams,
    solver: SolverConfig,
    alpha: float = 0.5,
    preparation: Optional[PreparationReport] = None,
) -> SimulationResult:
    """
    One run with its diagnostics and lemma pairing.

    Raises:
        SweepRunError: the run or its diagnostics failed.
    """
    params = gas.with_kappa(kappa)
    try:
        traj = run(initial.to_state(), params, solver)
        report = compute_report(traj, params, alpha)
    except HoffLabError as exc:
        raise SweepRunError(f"run failed for κ={kappa!r}: {exc.message}", kappa, exc) from exc

    try:
        pairing: Optional[PairingResult] = pair_with_simulation(traj, params, report)
    except HoffLabError as exc:
        logger.warning(f"lemma pairing failed for κ={kappa!r}: {exc.message}")
        pairing = None

    return SimulationResult(
        kappa=kappa,
        trajectory=traj,
        report=report,
        pairing=pairing,
        preparation=preparation or PreparationReport(kappa=kappa),
    )


def _gather(futures: list, kappas: list[float]) -> list[SimulationResult]:
    results = []
    for future, kappa in zip(futures, kappas):
        try:
            results.append(future.result())
        except SweepRunError:
            raise
        except Exception as exc:
            raise SweepRunError(f"run failed for κ={kappa!r}: {exc}", kappa, exc) from exc
    return results


def _task_runner() -> ThreadPoolTaskRunner:
    return ThreadPoolTaskRunner(max_workers=hofflab.settings.sweep_max_workers)


# --- κ → 0 study ---


class SweepRow(FrozenModel):
    kappa: float
    distances: DistanceComponents
    hoff1: Hoff1
    hoff2: Hoff2
    sup_theta: float
    min_rho: float
    inv_min_rho: float
    weighted_reg: WeightedRegularity
    D0_envelope: float
    dtinv_sigma_max: float
    pairing: Optional[PairingResult] = None
    preparation: PreparationReport


class SweepResult(FrozenModel):
    rows: list[SweepRow]
    norms: list[DistanceNorm]
    rates: dict[str, Optional[float]]
    rate_marker: Optional[str] = None
    monotone: bool
    regularity_blowup: bool
    runs: list[SimulationResult] = Field(default_factory=list, repr=False)

    @property
    def kappas(self) -> list[float]:
        return [row.kappa for row in self.rows]

    def distances(self, norm: DistanceNorm) -> np.ndarray:
        return np.array([getattr(row.distances, norm) for row in self.rows])

    def to_frame(self) -> pd.DataFrame:
        """The convergence table, one row per κ in sweep order."""
        records = []
        for row in self.rows:
            record: dict = {"kappa": row.kappa}
            for norm in self.norms:
                record[f"d_{norm}"] = getattr(row.distances, norm)
            for prefix, model in (("hoff1", row.hoff1), ("hoff2", row.hoff2)):
                for key, value in model.model_dump().items():
                    record[f"{prefix}.{key}"] = value
            record["sup_theta"] = row.sup_theta
            record["min_rho"] = row.min_rho
            record["inv_min_rho"] = row.inv_min_rho
            for key, value in row.weighted_reg.model_dump().items():
                if key != "alpha":
                    record[f"weighted_reg.{key}"] = value
            record["D0_envelope"] = row.D0_envelope
            record["dtinv_sigma_max"] = row.dtinv_sigma_max
            pairing = row.pairing
            record["pairing.sup_A2"] = pairing.sup_A2 if pairing else math.nan
            record["pairing.tau_bar"] = pairing.tau_bar if pairing else math.nan
            record["pairing.margin"] = pairing.margin if pairing else math.nan
            record["pairing.passed"] = pairing.passed if pairing else False
            records.append(record)
        return pd.DataFrame.from_records(records)

    def require_monotone(self) -> None:
        """
        Raises:
            NonMonotoneDistances: the distances of some norm do not decrease
                strictly along the positive κ of the sweep.
        """
        kappas = np.array(self.kappas)
        for norm in self.norms:
            distances = self.distances(norm)
            if not _is_monotone(kappas, {norm: distances}):
                raise NonMonotoneDistances(
                    f"{norm} distances to the κ = 0 run are not strictly decreasing in κ",
                    norm=norm,
                    kappas=self.kappas,
                    distances=distances.tolist(),
                )

    def rate_lines(self) -> list[str]:
        """Fitted rates as `# rate <norm> <slope>` comment lines."""
        if self.rate_marker is not None:
            return [f"# rate {self.rate_marker}"]
        return [
            f"# rate {norm} {'nan' if rate is None else repr(rate)}"
            for norm, rate in self.rates.items()
        ]


def _d0_envelope(base: InitialFields, kappa: float, alpha: float) -> float:
    """
    Bound on κ^α(‖∂xθ̂₀‖² + ‖∂xρ̂₀‖²) for data mollified at width κ^{1/4}.
    Infinite at κ = 0 when α < 1/2.
    """
    if kappa == 0:
        return math.inf if alpha < 0.5 else 0.0
    dx = base.grid.dx
    mass = float(np.sum(base.rho0**2) + np.sum(base.theta0**2)) * dx
    return ENVELOPE_SLACK * kappa ** (alpha - 0.5) * mass * phi_prime_l1() ** 2


def _rates(kappas: np.ndarray, table: dict[str, np.ndarray]) -> tuple[dict, Optional[str]]:
    positive = kappas > 0
    rates: dict[str, Optional[float]] = {}
    for norm, d in table.items():
        slope = log_log_slope(kappas[positive], d[positive])
        rates[norm] = None if math.isnan(slope) else slope
    degenerate = all(np.all(d[positive] == 0) for d in table.values())
    return rates, DEGENERATE_MARKER if degenerate else None


def _is_monotone(kappas: np.ndarray, table: dict[str, np.ndarray]) -> bool:
    positive = kappas > 0
    for d in table.values():
        d = d[positive]
        if np.all(d == 0):
            continue
        if np.any(np.diff(d) >= 0):
            return False
    return True


def merge_runs(
    config: SweepConfig, base: InitialFields, runs: list[SimulationResult]
) -> SweepResult:
    """Distances to the κ = 0 run, fitted rates and flags, in κ order."""
    reference = runs[-1].trajectory
    rows = []
    for result in runs:
        report = result.report
        min_rho = report.bounds.global_rho_min
        rows.append(
            SweepRow(
                kappa=result.kappa,
                distances=distance_components(result.trajectory, reference),
                hoff1=report.hoff1,
                hoff2=report.hoff2,
                sup_theta=report.bounds.global_theta_max,
                min_rho=min_rho,
                inv_min_rho=1.0 / min_rho,
                weighted_reg=report.weighted_reg,
                D0_envelope=_d0_envelope(base, result.kappa, config.alpha),
                dtinv_sigma_max=report.dtinv_sigma_max,
                pairing=result.pairing,
                preparation=result.preparation,
            )
        )

    kappas = np.array(config.kappas)
    table = {
        norm: np.array([getattr(row.distances, norm) for row in rows])
        for norm in config.distance_norms
    }
    rates, marker = _rates(kappas, table)
    monotone = _is_monotone(kappas, table)
    blowup = any(row.weighted_reg.initial_D0 > row.D0_envelope for row in rows)

    if not monotone:
        logger.warning("distances to the κ = 0 run are not strictly decreasing in κ")
    if blowup:
        logger.warning("initial weighted regularity exceeds the well-prepared envelope")
    return SweepResult(
        rows=rows,
        norms=list(config.distance_norms),
        rates=rates,
        rate_marker=marker,
        monotone=monotone,
        regularity_blowup=blowup,
        runs=runs,
    )


@prefect_flow(name="kappa-limit-study")
def _kappa_limit_flow(config: SweepConfig) -> SweepResult:
    run_logger = prefect.get_run_logger()
    base = config.base_initial.generate(config.grid)

    futures = []
    for kappa in config.kappas:
        if config.mollify:
            prepared = prepare_data(base, kappa)
            initial, preparation = prepared.data, prepared.report
        else:
            initial, preparation = base, PreparationReport(kappa=kappa)
        futures.append(
            simulate.submit(
                quote(initial),
                kappa,
                config.gas,
                config.solver,
                config.alpha,
                quote(preparation),
            )
        )
    run_logger.info(f"submitted {len(futures)} runs")

    result = merge_runs(config, base, _gather(futures, config.kappas))
    create_table_artifact(
        key="kappa-limit-study",
        frame=result.to_frame(),
        description="Distances to the κ = 0 run and uniform bounds per κ.",
    )
    return result


def kappa_limit_study(config: SweepConfig, require_monotone: bool = True) -> SweepResult:
    """
    Run every κ of the sweep, measure the distance of each run to the κ = 0
    run and fit log(distance) against log(κ). With `require_monotone=False`
    a non-monotone table is only flagged in `SweepResult.monotone`.

    Raises:
        SweepRunError: a run failed; carries the failing κ.
        NonMonotoneDistances: distances do not decrease strictly with κ.
    """
    logger.info(f"κ-limit study over {len(config.kappas)} values, n={config.grid.n}")
    flow = _kappa_limit_flow.with_options(task_runner=_task_runner())
    result = flow(config)
    if require_monotone:
        result.require_monotone()
    return result


# --- uniform bounds ---


class UniformityCheck(FrozenModel):
    factor: float
    ratios: dict[str, list[float]]
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def _uniform_terms(row: SweepRow) -> dict[str, float]:
    terms = {f"hoff1.{k}": v for k, v in row.hoff1.model_dump().items()}
    terms.update({f"hoff2.{k}": v for k, v in row.hoff2.model_dump().items()})
    terms["sup_theta"] = row.sup_theta
    terms["inv_min_rho"] = row.inv_min_rho
    return terms


def uniformity_check(result: SweepResult, factor: float = 3.0) -> UniformityCheck:
    """
    Every Hoff term, sup θ and 1/min ρ stays below `factor` times its κ = 0
    value. Terms that vanish at κ = 0 are referenced to the largest κ.
    """
    per_row = [_uniform_terms(row) for row in result.rows]
    zero, largest = per_row[-1], per_row[0]
    ratios: dict[str, list[float]] = {}
    failures = []
    for name, ref in zero.items():
        if ref == 0:
            ref = largest[name]
        values = [terms[name] for terms in per_row]
        if ref == 0:
            ratios[name] = [0.0 if v == 0 else math.inf for v in values]
        else:
            ratios[name] = [v / ref for v in values]
        for kappa, ratio in zip(result.kappas, ratios[name]):
            if ratio > factor:
                failures.append(f"{name} at κ={kappa!r}: ratio {ratio!r}")
    for failure in failures:
        logger.warning(f"uniform bound exceeded: {failure}")
    return UniformityCheck(factor=factor, ratios=ratios, failures=failures)


# --- initial-data stability ---


class StabilityRow(FrozenModel):
    epsilon: float
    distance: float


class StabilityResult(FrozenModel):
    field: Literal["rho", "u"]
    kappa: float
    norm: DistanceNorm
    rows: list[StabilityRow]
    exponent: Optional[float] = None
    threshold: float
    passed: Optional[bool] = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "epsilon": [row.epsilon for row in self.rows],
                f"d_{self.norm}": [row.distance for row in self.rows],
            }
        )


def perturbation(grid: Grid) -> np.ndarray:
    """Smooth bump of unit height centered at x = 1/2, supported on (1/4, 3/4)."""
    return bump((grid.cell_centers - 0.5) / 0.25) / float(bump(0.0))


def perturbed(base: InitialFields, epsilon: float, field: Literal["rho", "u"]) -> InitialFields:
    """
    Raises:
        PositivityError: the perturbed density is not positive.
    """
    delta = epsilon * perturbation(base.grid)
    if field == "rho":
        return InitialFields(rho0=base.rho0 + delta, u0=base.u0, theta0=base.theta0)
    return InitialFields(rho0=base.rho0, u0=base.u0 + delta, theta0=base.theta0)


@prefect_flow(name="stability-probe")
def _stability_flow(
    base: InitialFields,
    sizes: list[float],
    kappa: float,
    gas: GasParams,
    solver: SolverConfig,
    field: Literal["rho", "u"],
    norm: DistanceNorm,
) -> StabilityResult:
    positive = [eps for eps in sizes if eps != 0]
    inputs = [base] + [perturbed(base, eps, field) for eps in positive]
    futures = [simulate.submit(quote(data), kappa, gas, solver) for data in inputs]
    reference, *others = _gather(futures, [kappa] * len(futures))

    distances = {
        eps: getattr(distance_components(other.trajectory, reference.trajectory), norm)
        for eps, other in zip(positive, others)
    }
    rows = [StabilityRow(epsilon=eps, distance=distances.get(eps, 0.0)) for eps in sizes]

    slope = log_log_slope(
        np.array([row.epsilon for row in rows]), np.array([row.distance for row in rows])
    )
    exponent = None if math.isnan(slope) else slope
    threshold = STABILITY_THRESHOLDS[field]
    passed = None if exponent is None else exponent >= threshold
    if passed is False:
        logger.warning(
            f"stability exponent {exponent!r} for {field} perturbations is below {threshold!r}"
        )
    result = StabilityResult(
        field=field,
        kappa=kappa,
        norm=norm,
        rows=rows,
        exponent=exponent,
        threshold=threshold,
        passed=passed,
    )
    create_table_artifact(key="stability-probe", frame=result.to_frame())
    return result


def stability_probe(
    base: InitialFields,
    sizes: list[float],
    kappa: float,
    gas: GasParams,
    solver: SolverConfig,
    field: Literal["rho", "u"] = "rho",
    norm: DistanceNorm = "lagrangian_composed",
) -> StabilityResult:
    """
    Perturb ρ₀ (or u₀) by ε times a smooth bump, run both data sets and fit
    log d(ε) against log ε. The fitted exponent is compared with 1/3 - 0.05
    for density perturbations and 1 - 0.05 for velocity perturbations.
    """
    logger.info(f"stability probe: {field} perturbations {sizes!r} at κ={kappa!r}")
    flow = _stability_flow.with_options(task_runner=_task_runner())
    return flow(base, sizes, kappa, gas, solver, field, norm)
