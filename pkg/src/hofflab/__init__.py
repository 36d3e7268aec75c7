# --- Public top-level API ---

from .settings import settings

from .core import GasParams, Grid, LagState, thermo
from .solver import SolverConfig, Trajectory, run, step
from .diagnostics import DiagnosticsReport, compute_report
from .sweep import SweepConfig, kappa_limit_study, stability_probe
from .lemma import BoundProblem, compute_threshold, verify_bound

# --- Version ---

try:
    from ._version import version as __version__  # type: ignore
except ImportError:
    __version__ = "unknown"
