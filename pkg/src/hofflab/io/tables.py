from pathlib import Path
from typing import Iterable, Union

import numpy as np
import pandas as pd

from hofflab.diagnostics.report import DiagnosticsReport
from hofflab.lemma.bound import BoundVerification
from hofflab.sweep.study import StabilityResult, SweepResult, UniformityCheck

FLOAT_FORMAT = "%.17g"


def diagnostics_frame(report: DiagnosticsReport) -> pd.DataFrame:
    """Time series of one run, one row per snapshot."""
    return pd.DataFrame(report.series())


def summary_frame(report: DiagnosticsReport) -> pd.DataFrame:
    return pd.DataFrame([report.summary()])


def sweep_frame(result: SweepResult) -> pd.DataFrame:
    return result.to_frame()


def stability_frame(result: StabilityResult) -> pd.DataFrame:
    return result.to_frame()


def uniformity_frame(check: UniformityCheck, kappas: list[float]) -> pd.DataFrame:
    """Ratio of every uniform-bound term to its reference value, per κ."""
    return pd.DataFrame({"kappa": kappas, **check.ratios})


def lemma_frame(verification: BoundVerification) -> pd.DataFrame:
    frame = verification.to_frame()
    frame["error"] = [c.error["error"] if c.error else "" for c in verification.checks]
    return frame


def resolution_frame(reports: dict[int, DiagnosticsReport]) -> pd.DataFrame:
    """Largest identity residuals per cell count, sorted by n."""
    rows = []
    for n in sorted(reports):
        report = reports[n]
        rows.append(
            {
                "n": n,
                "entropy_balance_residual": float(np.max(report.entropy_balance_residual)),
                "sigma_pde_residual": float(np.max(report.sigma_pde_residual)),
                "pgamma_residual": float(np.max(report.pgamma_residual)),
                "flow_map_residual": report.flow_map_residual,
                "energy_drift": report.conserved.energy_drift,
            }
        )
    return pd.DataFrame(rows)


def write_csv(
    frame: pd.DataFrame,
    path: Union[str, Path],
    comments: Iterable[str] = (),
) -> Path:
    """
    Write a table with 17 significant digits, so equal inputs give equal
    bytes. `comments` are appended as lines starting with '#'.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    for comment in comments:
        text += comment if comment.startswith("#") else f"# {comment}"
        text += "\n"
    path.write_text(text)
    return path


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")
