"""
Exception hierarchy for HoffLab.

Every error is a `HoffLabError`. It deliberately does not derive from
`ValueError`, so raising one inside a pydantic validator propagates the
original error instead of being folded into a `pydantic.ValidationError`.
"""

from typing import Any, Optional


class HoffLabError(Exception):
    """Base class for all domain failures (CLI exit status 1)."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_record(self) -> dict[str, Any]:
        record: dict[str, Any] = {"error": type(self).__name__, "message": self.message}
        for key, value in self.context.items():
            record[key] = _jsonable(value)
        return record


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


# --- core ---


class PositivityError(HoffLabError):
    """Density or temperature is not strictly positive."""


class DomainError(HoffLabError):
    """Argument outside the domain of a function."""


# --- solver ---


class LinearSolveError(HoffLabError):
    """The cyclic tridiagonal system could not be solved."""


class BlowupError(HoffLabError):
    def __init__(self, message: str, t: float, extrema: Optional[dict] = None):
        super().__init__(message, t=t, extrema=extrema or {})
        self.t = t
        self.extrema = extrema or {}


class ConfigError(HoffLabError):
    """Invalid solver or sweep configuration."""


# --- diagnostics ---


class InsufficientSnapshots(HoffLabError):
    def __init__(self, message: str, required: int = 3, available: int = 0):
        super().__init__(message, required=required, available=available)


class NormalizationError(HoffLabError):
    """Mean momentum is not zero, so the stress bound does not apply."""


# --- sweep ---


class KernelUnderresolved(HoffLabError):
    def __init__(self, message: str, eta: float, dx: float):
        super().__init__(message, eta=eta, dx=dx)
        self.eta = eta
        self.dx = dx


class GridMismatch(HoffLabError):
    """Two trajectories do not share a label grid or snapshot times."""


class SweepRunError(HoffLabError):
    def __init__(self, message: str, kappa: float, cause: Optional[BaseException] = None):
        context: dict[str, Any] = {"kappa": kappa}
        if isinstance(cause, HoffLabError):
            context["cause"] = cause.to_record()
        elif cause is not None:
            context["cause"] = repr(cause)
        super().__init__(message, **context)
        self.kappa = kappa
        self.cause = cause


class NonMonotoneDistances(HoffLabError):
    """Distances to the κ = 0 run do not decrease strictly along the κ list."""

    def __init__(self, message: str, norm: str, kappas: list[float], distances: list[float]):
        super().__init__(message, norm=norm, kappas=kappas, distances=distances)
        self.norm = norm
        self.kappas = kappas
        self.distances = distances


# --- bound lemma ---


class QuadratureFailure(HoffLabError):
    """The primitive of 1/Φ could not be evaluated."""


class NotBoundable(HoffLabError):
    """Ψ(τ₀) already reaches sup Ψ."""


class IntegrationBlowup(HoffLabError):
    def __init__(self, message: str, kappa: float, t: float):
        super().__init__(message, kappa=kappa, t=t)
        self.kappa = kappa
        self.t = t


# --- io ---


class ParseError(HoffLabError):
    def __init__(self, message: str, lineno: Optional[int] = None, path: Optional[str] = None):
        super().__init__(message, lineno=lineno, path=path)
        self.lineno = lineno


class ConfigValidationError(HoffLabError):
    """A parsed configuration violates a physical or structural condition."""

    def __init__(self, message: str, errors: Optional[list[str]] = None):
        super().__init__(message, errors=errors or [message])
        self.errors = errors or [message]


class FormatError(HoffLabError):
    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message, row=row)
        self.row = row


class VerificationFailure(HoffLabError):
    def __init__(self, message: str, invariant: str, value: float, threshold: float):
        super().__init__(message, invariant=invariant, value=value, threshold=threshold)
        self.invariant = invariant
        self.value = value
        self.threshold = threshold
