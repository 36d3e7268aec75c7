from .measures import Measure, space_derivative, space_integral, time_weight
from .conserved import ConservedIntegrals, EnergyBounds, conserved_integrals, energy_bounds
from .entropy import (
    EntropyBalance,
    EntropyBudget,
    entropy_balance,
    entropy_budget,
    entropy_production_rate,
    total_entropy,
)
from .residuals import pgamma_identity_residual, sigma_pde_residual
from .hoff import Hoff1, Hoff2, HoffEnergies, hoff_energies
from .bounds import BoundsReport, GagliardoNirenbergCheck, bounds_report, gagliardo_nirenberg_check
from .regularity import WeightedRegularity, weighted_regularity
from .stress import DtInvSigmaCheck, dtinv_sigma_check
from .report import DiagnosticsReport, compute_report
