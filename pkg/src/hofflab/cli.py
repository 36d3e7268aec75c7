"""
The `hofflab` command.

    hofflab run <config>                  one trajectory and its diagnostics
    hofflab sweep <config>                the κ → 0 study (and stability probe)
    hofflab lemma17 <config>              threshold and bound verification
    hofflab verify <trajectory> <thresholds>
    hofflab plots <csv>...                gnuplot scripts for report tables

Exit status: 0 on success, 1 on a domain failure (a JSON error record is
written to stderr), 2 on a usage error.
"""

import argparse
import json
import time
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import Field, ValidationError
from pydantic_settings import TomlConfigSettingsSource
from rich.table import Table

import hofflab
from hofflab.diagnostics.report import DiagnosticsReport, compute_report
from hofflab.errors import (
    ConfigValidationError,
    HoffLabError,
    ParseError,
    VerificationFailure,
)
from hofflab.io.config import ExperimentConfig, parse_config
from hofflab.io.manifest import RunManifest
from hofflab.io.plots import emit_plots
from hofflab.io.tables import (
    diagnostics_frame,
    lemma_frame,
    resolution_frame,
    stability_frame,
    summary_frame,
    sweep_frame,
    uniformity_frame,
    write_csv,
)
from hofflab.io.trajectory_io import read_trajectory, write_trajectory
from hofflab.lemma.bound import compute_threshold, verify_bound
from hofflab.solver.integrate import run
from hofflab.solver.trajectory import Trajectory
from hofflab.sweep.prepare import prepare_data
from hofflab.sweep.study import kappa_limit_study, stability_probe, uniformity_check
from hofflab.utilities.logging import get_logger
from hofflab.utilities.rich import console, error_console
from hofflab.utilities.types import FrozenModel

logger = get_logger(__name__)


def _output_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out) if args.out else Path(hofflab.settings.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(command: str, path: str, config: ExperimentConfig) -> RunManifest:
    return RunManifest(
        command=command,
        config_path=path,
        config_hash=config.config_hash(),
        parameters=config.echo(),
    )


def _finish(manifest: RunManifest, started: float, out: Path, outputs: list[Path]) -> None:
    for path in outputs:
        manifest.add_output(path)
    manifest.wall_clock = time.perf_counter() - started
    manifest.write(out / "manifest.json")


def _summary_table(title: str, values: dict) -> Table:
    table = Table(title=title)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for key, value in values.items():
        table.add_row(key, repr(value) if isinstance(value, float) else str(value))
    return table


# --- run ---


def _simulate(config: ExperimentConfig) -> tuple[Trajectory, DiagnosticsReport]:
    data = config.initial.generate(config.grid)
    traj = run(data.to_state(), config.gas, config.solver)
    return traj, compute_report(traj, config.gas)


def cmd_run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    config = parse_config(args.config)
    out = _output_dir(args)
    manifest = _manifest("run", args.config, config)

    traj, report = _simulate(config)
    outputs = [
        write_trajectory(traj, out / "trajectory.txt"),
        write_csv(diagnostics_frame(report), out / "diagnostics.csv"),
        write_csv(summary_frame(report), out / "summary.csv"),
    ]

    if args.refine:
        reports = {config.grid.n: report}
        for level in range(1, args.refine + 1):
            factor = 2**level
            refined = config.model_copy(
                update={
                    "grid": config.grid.model_copy(update={"n": config.grid.n * factor}),
                    "solver": config.solver.model_copy(
                        update={"dt_initial": config.solver.dt_initial / factor}
                    ),
                }
            )
            _, reports[refined.grid.n] = _simulate(refined)
        outputs.append(write_csv(resolution_frame(reports), out / "resolution.csv"))

    _finish(manifest, started, out, outputs)
    summary = report.summary()
    console.print(
        _summary_table(
            "run",
            {
                "snapshots": len(traj),
                "energy drift": summary["energy_drift"],
                "momentum drift": summary["momentum_drift"],
                "flow-map residual": summary["flow_map_residual"],
                "sup A₂": summary["A2_max"],
                "output": str(out),
            },
        )
    )
    return 0


# --- sweep ---


def cmd_sweep(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    config = parse_config(args.config)
    sweep = config.sweep_config()
    out = _output_dir(args)
    manifest = _manifest("sweep", args.config, config)

    result = kappa_limit_study(sweep, require_monotone=False)
    check = uniformity_check(result, config.sweep.uniformity_factor)
    flags = [
        f"# monotone {str(result.monotone).lower()}",
        f"# regularity_blowup {str(result.regularity_blowup).lower()}",
    ]
    outputs = [
        write_csv(sweep_frame(result), out / "sweep.csv", [*result.rate_lines(), *flags]),
        write_csv(uniformity_frame(check, result.kappas), out / "uniformity.csv"),
    ]

    if sweep.stability is not None:
        probe = sweep.stability
        base = sweep.base_initial.generate(sweep.grid)
        if sweep.mollify:
            base = prepare_data(base, probe.kappa).data
        stability = stability_probe(
            base, probe.sizes, probe.kappa, sweep.gas, sweep.solver, probe.field, probe.norm
        )
        exponent = "nan" if stability.exponent is None else repr(stability.exponent)
        outputs.append(
            write_csv(
                stability_frame(stability),
                out / "stability.csv",
                [f"# exponent {exponent}", f"# threshold {stability.threshold!r}"],
            )
        )

    _finish(manifest, started, out, outputs)
    console.print(
        _summary_table(
            "κ → 0 study",
            {
                **{f"rate {norm}": rate for norm, rate in result.rates.items()},
                "rate marker": result.rate_marker or "",
                "monotone": result.monotone,
                "regularity blow-up": result.regularity_blowup,
                "uniform bounds": check.passed,
            },
        )
    )
    result.require_monotone()
    return 0


# --- lemma17 ---


def cmd_lemma17(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    config = parse_config(args.config)
    if config.lemma17 is None:
        raise ConfigValidationError("the configuration has no [lemma17] section")
    out = _output_dir(args)
    manifest = _manifest("lemma17", args.config, config)

    section = config.lemma17
    problem = section.to_problem()
    result = compute_threshold(problem)
    verification = verify_bound(problem, section.kappa_grid(result), result)
    outputs = [
        write_csv(
            lemma_frame(verification),
            out / "lemma17.csv",
            [f"# kappa0 {result.kappa0!r}", f"# tau_bar {result.tau_bar!r}"],
        )
    ]
    _finish(manifest, started, out, outputs)
    console.print(
        _summary_table(
            "comparison lemma",
            {"κ₀": result.kappa0, "τ̄": result.tau_bar, "passed": verification.passed},
        )
    )
    if not verification.passed:
        failed = next(c for c in verification.checks if c.below_kappa0 and not c.passed)
        raise VerificationFailure(
            f"bound violated for κ={failed.kappa!r}",
            invariant="sup_tau <= tau_bar_kappa",
            value=failed.sup_tau,
            threshold=failed.tau_bar_kappa,
        )
    return 0


# --- verify ---


class VerifyThresholds(FrozenModel):
    """Largest accepted value of each invariant. None skips the check."""

    mass_drift: Optional[float] = 1e-12
    energy_drift: Optional[float] = 1e-6
    momentum_drift: Optional[float] = 1e-6
    flow_map_residual: Optional[float] = 5e-3
    torus_length_error: Optional[float] = 1e-10
    entropy_balance_residual: Optional[float] = None
    sigma_pde_residual: Optional[float] = None
    pgamma_residual: Optional[float] = None


class ThresholdsFile(FrozenModel):
    thresholds: VerifyThresholds = Field(default_factory=VerifyThresholds)


def read_thresholds(path: str) -> VerifyThresholds:
    """
    Raises:
        ParseError: the file is missing.
        ConfigValidationError: unknown keys or non-numeric values.
    """
    if not Path(path).is_file():
        raise ParseError(f"thresholds file {path!r} does not exist", path=path)
    try:
        data = TomlConfigSettingsSource(ThresholdsFile, toml_file=Path(path))()
        return ThresholdsFile.model_validate(data).thresholds
    except ValidationError as exc:
        raise ConfigValidationError(f"invalid thresholds: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}", path=path) from exc


def verification_values(report: DiagnosticsReport) -> dict[str, float]:
    return {
        "mass_drift": report.conserved.mass_drift,
        "energy_drift": report.conserved.energy_drift,
        "momentum_drift": report.conserved.momentum_drift,
        "flow_map_residual": report.flow_map_residual,
        "torus_length_error": report.torus_length_error,
        "entropy_balance_residual": float(np.max(report.entropy_balance_residual)),
        "sigma_pde_residual": float(np.max(report.sigma_pde_residual)),
        "pgamma_residual": float(np.max(report.pgamma_residual)),
    }


def cmd_verify(args: argparse.Namespace) -> int:
    thresholds = read_thresholds(args.thresholds)
    traj = read_trajectory(args.trajectory)
    values = verification_values(compute_report(traj))

    failures = []
    for invariant, limit in thresholds.model_dump().items():
        if limit is None:
            continue
        value = values[invariant]
        if not value <= limit:
            failures.append(
                VerificationFailure(
                    f"{invariant} = {value!r} exceeds {limit!r}",
                    invariant=invariant,
                    value=value,
                    threshold=limit,
                )
            )
    console.print(_summary_table("verify", values))
    if failures:
        for failure in failures[1:]:
            _report_error(failure)
        raise failures[0]
    return 0


# --- plots ---


def cmd_plots(args: argparse.Namespace) -> int:
    out = Path(args.out) if args.out else None
    for path in emit_plots(args.tables, out):
        console.print(f"wrote {path}")
    return 0


# --- entry point ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hofflab",
        description="Numerical laboratory for the zero-conductivity limit of 1D "
        "compressible Navier-Stokes.",
    )
    parser.add_argument("--version", action="version", version=hofflab.__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help)
        sub.set_defaults(handler=handler)
        return sub

    sub = add("run", cmd_run, "integrate one trajectory and compute its diagnostics")
    sub.add_argument("config")
    sub.add_argument("--out", help="output directory (default: HOFFLAB_OUTPUT_DIR)")
    sub.add_argument(
        "--refine",
        type=int,
        default=0,
        help="also rerun at 2, 4, ... times the cells and write resolution.csv",
    )

    sub = add("sweep", cmd_sweep, "run the κ → 0 study")
    sub.add_argument("config")
    sub.add_argument("--out", help="output directory (default: HOFFLAB_OUTPUT_DIR)")

    sub = add("lemma17", cmd_lemma17, "compute the comparison threshold and verify it")
    sub.add_argument("config")
    sub.add_argument("--out", help="output directory (default: HOFFLAB_OUTPUT_DIR)")

    sub = add("verify", cmd_verify, "re-check a stored trajectory against thresholds")
    sub.add_argument("trajectory")
    sub.add_argument("thresholds")

    sub = add("plots", cmd_plots, "write gnuplot scripts for report tables")
    sub.add_argument("tables", nargs="+")
    sub.add_argument("--out", help="directory for the scripts (default: next to each table)")
    return parser


def _report_error(exc: HoffLabError) -> None:
    error_console.print(
        json.dumps(exc.to_record(), ensure_ascii=False),
        markup=False,
        highlight=False,
        soft_wrap=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        return args.handler(args)
    except HoffLabError as exc:
        logger.debug(f"{args.command} failed", exc_info=True)
        _report_error(exc)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
