"""
Initial data generators.

Every generator produces (ρ₀, u₀, θ₀) on the label grid and checks the
data conditions discretely:

    (16) 0 < ρ̲₀ ≤ ρ₀ ≤ ρ̄₀
    (17) 0 < θ̲₀ ≤ θ₀ ≤ θ̄₀
    (18) ∫ρ₀u₀² + ∫(∂xu₀)² ≤ C₀

`sampled_jump` data is deliberately rough and comes back flagged as
ill-prepared.
"""

from pathlib import Path
from typing import Literal, Optional

import numpy as np
import pandas as pd
from pydantic import Field, model_validator

from hofflab.core.grid import Grid
from hofflab.core.operators import deriv
from hofflab.core.state import InitialFields
from hofflab.errors import ConfigValidationError, FormatError
from hofflab.solver.flow import galilean_normalize
from hofflab.sweep.mollifier import mollify
from hofflab.utilities.types import FrozenModel

Generator = Literal["constant", "sine_density", "sine_all", "sampled_jump", "file"]


class InitialDataSpec(FrozenModel):
    generator: Generator = "constant"
    rho_mean: float = 1.0
    rho_amplitude: float = 0.0
    u_mean: float = 0.0
    u_amplitude: float = 0.0
    theta_mean: float = 1.0
    theta_amplitude: float = 0.0
    wavenumber: int = Field(default=1, ge=1)
    phase: float = 0.0
    jump_low: float = 0.7
    jump_high: float = 1.3
    path: Optional[Path] = None

    rho_lower: Optional[float] = None
    rho_upper: Optional[float] = None
    theta_lower: Optional[float] = None
    theta_upper: Optional[float] = None
    C0: Optional[float] = None

    presmooth_width: Optional[float] = Field(
        default=None,
        description="Mollify all three fields once at this width before use.",
    )
    galilean_normalize: bool = False

    @model_validator(mode="after")
    def _validate_bounds(self):
        if self.rho_lower is not None and not self.rho_lower > 0:
            raise ValueError("(16) violated: ρ̲₀ ≤ 0")
        if self.theta_lower is not None and not self.theta_lower > 0:
            raise ValueError("(17) violated: θ̲₀ ≤ 0")
        if self.generator == "file" and self.path is None:
            raise ValueError("the file generator needs a path")
        if self.generator == "sampled_jump" and not (
            self.jump_low > 0 and self.jump_high > 0
        ):
            raise ValueError("(16) violated: ρ̲₀ ≤ 0")
        return self

    def _raw_fields(self, grid: Grid) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = grid.cell_centers
        n = grid.n
        wave = np.sin(2 * np.pi * self.wavenumber * x + self.phase)
        ones = np.ones(n)

        if self.generator == "constant":
            return self.rho_mean * ones, self.u_mean * ones, self.theta_mean * ones
        if self.generator == "sine_density":
            return (
                self.rho_mean + self.rho_amplitude * wave,
                self.u_mean * ones,
                self.theta_mean * ones,
            )
        if self.generator == "sine_all":
            return (
                self.rho_mean + self.rho_amplitude * wave,
                self.u_mean + self.u_amplitude * wave,
                self.theta_mean + self.theta_amplitude * wave,
            )
        if self.generator == "sampled_jump":
            inside = (x >= 0.25) & (x < 0.75)
            return (
                np.where(inside, self.jump_high, self.jump_low),
                self.u_mean * ones,
                self.theta_mean * ones,
            )
        return _read_fields(self.path, n)

    def generate(self, grid: Grid) -> InitialFields:
        """
        Raises:
            ConfigValidationError: the data violates (16), (17) or (18).
            FormatError: a data file is malformed.
        """
        rho, u, theta = self._raw_fields(grid)
        if self.presmooth_width is not None:
            rho = mollify(rho, self.presmooth_width, grid)
            u = mollify(u, self.presmooth_width, grid)
            theta = mollify(theta, self.presmooth_width, grid)
        self._check(rho, u, theta, grid)
        fields = InitialFields(
            rho0=rho,
            u0=u,
            theta0=theta,
            ill_prepared=self.generator == "sampled_jump" and self.presmooth_width is None,
        )
        if self.galilean_normalize:
            state = galilean_normalize(fields.to_state())
            fields = fields.model_copy(update={"u0": state.u})
        return fields

    def _check(self, rho: np.ndarray, u: np.ndarray, theta: np.ndarray, grid: Grid) -> None:
        errors = []
        if not np.all(rho > 0):
            errors.append("(16) violated: ρ̲₀ ≤ 0")
        if self.rho_lower is not None and np.min(rho) < self.rho_lower:
            errors.append(f"(16) violated: min ρ₀ = {np.min(rho)!r} < ρ̲₀")
        if self.rho_upper is not None and np.max(rho) > self.rho_upper:
            errors.append(f"(16) violated: max ρ₀ = {np.max(rho)!r} > ρ̄₀")
        if not np.all(theta > 0):
            errors.append("(17) violated: θ̲₀ ≤ 0")
        if self.theta_lower is not None and np.min(theta) < self.theta_lower:
            errors.append(f"(17) violated: min θ₀ = {np.min(theta)!r} < θ̲₀")
        if self.theta_upper is not None and np.max(theta) > self.theta_upper:
            errors.append(f"(17) violated: max θ₀ = {np.max(theta)!r} > θ̄₀")
        energy = float(np.sum(rho * u**2 + deriv(u, grid) ** 2) * grid.dx)
        if not np.isfinite(energy) or (self.C0 is not None and energy > self.C0):
            errors.append(f"(18) violated: ∫ρ₀u₀² + ∫(∂xu₀)² = {energy!r}")
        if errors:
            raise ConfigValidationError("; ".join(errors), errors=errors)


def _read_fields(path: Path, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as exc:
        raise FormatError(f"cannot read initial data {path}: {exc}") from exc
    missing = {"rho", "u", "theta"} - set(frame.columns)
    if missing:
        raise FormatError(f"initial data {path} lacks columns {sorted(missing)}")
    if len(frame) != n:
        raise FormatError(f"initial data {path} has {len(frame)} rows, grid has {n}")
    return (
        frame["rho"].to_numpy(dtype=np.float64),
        frame["u"].to_numpy(dtype=np.float64),
        frame["theta"].to_numpy(dtype=np.float64),
    )
