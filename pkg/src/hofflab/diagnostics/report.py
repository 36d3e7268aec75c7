from typing import Any, Optional

import numpy as np

from hofflab.core.gas import GasParams
from hofflab.diagnostics.bounds import (
    BoundsReport,
    GagliardoNirenbergCheck,
    bounds_report,
    gagliardo_nirenberg_check,
)
from hofflab.diagnostics.conserved import (
    ConservedIntegrals,
    EnergyBounds,
    conserved_integrals,
    energy_bounds,
)
from hofflab.diagnostics.entropy import EntropyBudget, entropy_balance, entropy_budget
from hofflab.diagnostics.hoff import Hoff1, Hoff2, hoff_energies
from hofflab.diagnostics.regularity import WeightedRegularity, weighted_regularity
from hofflab.diagnostics.residuals import pgamma_identity_residual, sigma_pde_residual
from hofflab.diagnostics.stress import DtInvSigmaCheck, dtinv_sigma_check
from hofflab.errors import NormalizationError
from hofflab.solver.flow import flow_map_consistency
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.logging import get_logger
from hofflab.utilities.types import FloatSeries, FrozenModel

logger = get_logger(__name__)


class DiagnosticsReport(FrozenModel):
    """Every functional and identity residual evaluated on one trajectory."""

    times: FloatSeries
    residual_times: FloatSeries
    conserved: ConservedIntegrals
    entropy_production: FloatSeries
    entropy_balance_residual: FloatSeries
    bounds: BoundsReport
    hoff1: Hoff1
    hoff2: Hoff2
    hoff1_label: Hoff1
    hoff2_label: Hoff2
    A1: FloatSeries
    A2: FloatSeries
    sigma_pde_residual: FloatSeries
    pgamma_residual: FloatSeries
    dtinv_sigma: Optional[DtInvSigmaCheck] = None
    dtinv_sigma_skipped: Optional[str] = None
    weighted_reg: WeightedRegularity
    energy_bounds: EnergyBounds
    entropy_budget: EntropyBudget
    gagliardo_nirenberg: GagliardoNirenbergCheck
    flow_map_residual: float
    torus_length_error: float

    @property
    def dtinv_sigma_max(self) -> float:
        return self.dtinv_sigma.max_abs if self.dtinv_sigma is not None else float("nan")

    def series(self) -> dict[str, np.ndarray]:
        """
        Time series columns, one row per snapshot. Identity residuals exist
        at the interior snapshots only and are NaN in the first and last row.
        """
        return {
            "t": self.times,
            "mass_M": self.conserved.mass,
            "energy_E": self.conserved.energy,
            "momentum": self.conserved.momentum,
            "pressure_int": self.conserved.pressure_int,
            "kinetic_int": self.conserved.kinetic_int,
            "entropy_production": self.entropy_production,
            "entropy_balance_residual": _pad(self.entropy_balance_residual),
            "entropy_budget_residual": self.entropy_budget.residual,
            "rho_min": self.bounds.rho_min,
            "rho_max": self.bounds.rho_max,
            "theta_min": self.bounds.theta_min,
            "theta_max": self.bounds.theta_max,
            "A1": self.A1,
            "A2": self.A2,
            "sigma_pde_residual": _pad(self.sigma_pde_residual),
            "pgamma_residual": _pad(self.pgamma_residual),
        }

    def summary(self) -> dict[str, Any]:
        """Scalar results flattened to dotted column names."""
        row: dict[str, Any] = {
            "mass_drift": self.conserved.mass_drift,
            "energy_drift": self.conserved.energy_drift,
            "momentum_drift": self.conserved.momentum_drift,
            "flow_map_residual": self.flow_map_residual,
            "torus_length_error": self.torus_length_error,
            "entropy_balance_residual_max": float(np.max(self.entropy_balance_residual)),
            "sigma_pde_residual_max": float(np.max(self.sigma_pde_residual)),
            "pgamma_residual_max": float(np.max(self.pgamma_residual)),
            "A2_max": float(np.max(self.A2)),
        }
        for prefix, model in (
            ("hoff1", self.hoff1),
            ("hoff2", self.hoff2),
            ("hoff1_label", self.hoff1_label),
            ("hoff2_label", self.hoff2_label),
            ("bounds", self.bounds),
            ("weighted_reg", self.weighted_reg),
            ("energy_bounds", self.energy_bounds),
            ("gagliardo_nirenberg", self.gagliardo_nirenberg),
        ):
            for key, value in model.model_dump().items():
                if np.ndim(value) == 0:
                    row[f"{prefix}.{key}"] = value
        budget = self.entropy_budget
        row["entropy_budget.total_production"] = budget.total_production
        row["entropy_budget.production_bound"] = budget.production_bound
        row["entropy_budget.passed"] = budget.passed
        if self.dtinv_sigma is not None:
            for key, value in self.dtinv_sigma.model_dump().items():
                row[f"dtinv_sigma.{key}"] = value
        else:
            row["dtinv_sigma.skipped"] = self.dtinv_sigma_skipped
        return row


def _pad(interior: np.ndarray) -> np.ndarray:
    return np.concatenate([[np.nan], interior, [np.nan]])


def compute_report(
    traj: Trajectory, params: Optional[GasParams] = None, alpha: float = 0.5
) -> DiagnosticsReport:
    """
    Evaluate the full diagnostics suite. The stress bound is recorded as
    skipped when the data carries net momentum.

    Raises:
        InsufficientSnapshots: fewer than 3 snapshots.
    """
    params = params or traj.params
    hoff = hoff_energies(traj, params)
    hoff_label = hoff_energies(traj, params, measure="label")
    balance = entropy_balance(traj, params)

    dtinv: Optional[DtInvSigmaCheck] = None
    skipped: Optional[str] = None
    try:
        dtinv = dtinv_sigma_check(traj, params)
    except NormalizationError as exc:
        logger.warning(f"stress bound skipped: {exc.message}")
        skipped = exc.message

    length = np.sum(traj.specific_volumes(), axis=-1) * traj.grid.dx
    return DiagnosticsReport(
        times=traj.times,
        residual_times=balance.residual_times,
        conserved=conserved_integrals(traj, params),
        entropy_production=balance.production,
        entropy_balance_residual=balance.residual,
        bounds=bounds_report(traj),
        hoff1=hoff.hoff1,
        hoff2=hoff.hoff2,
        hoff1_label=hoff_label.hoff1,
        hoff2_label=hoff_label.hoff2,
        A1=hoff.A1,
        A2=hoff.A2,
        sigma_pde_residual=sigma_pde_residual(traj, params),
        pgamma_residual=pgamma_identity_residual(traj, params),
        dtinv_sigma=dtinv,
        dtinv_sigma_skipped=skipped,
        weighted_reg=weighted_regularity(traj, params, alpha),
        energy_bounds=energy_bounds(traj, params),
        entropy_budget=entropy_budget(traj, params),
        gagliardo_nirenberg=gagliardo_nirenberg_check(traj, params),
        flow_map_residual=flow_map_consistency(traj),
        torus_length_error=float(np.max(np.abs(length - 1.0))),
    )
