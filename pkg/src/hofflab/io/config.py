"""
Experiment configuration files.

An experiment is a TOML file with the sections `[gas]`, `[grid]`,
`[solver]`, `[initial]`, `[sweep]` and `[lemma17]`. Unknown keys are
errors. Physical conditions are checked on the parsed values, and the
initial data is generated once so that its discrete bounds are checked
at parse time.
"""

import hashlib
import json
import re
import tomllib
from pathlib import Path
from typing import Callable, Literal, Optional, Union

import numpy as np
from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_settings import TomlConfigSettingsSource

from hofflab.core.gas import GasParams
from hofflab.core.grid import Grid
from hofflab.errors import ConfigValidationError, ParseError
from hofflab.io.initial_data import InitialDataSpec
from hofflab.lemma.bound import BoundProblem, BoundResult
from hofflab.lemma.pairing import StressPhiCoefficients, stress_phi
from hofflab.solver.config import SolverConfig
from hofflab.sweep.distance import DistanceNorm
from hofflab.sweep.study import StabilityConfig, SweepConfig, check_kappa_list
from hofflab.utilities.logging import get_logger
from hofflab.utilities.types import FrozenModel

logger = get_logger(__name__)

SNAPSHOTS_REQUIRED = "sweeps need solver.snapshot_every so that all runs share snapshot times"


class SweepSection(FrozenModel):
    kappas: list[float]
    mollify: bool = True
    distance_norms: list[DistanceNorm] = [
        "L2L2_rho",
        "L2L2_theta",
        "L2H1_u",
        "lagrangian_composed",
    ]
    alpha: float = Field(default=0.5, gt=0, lt=1)
    uniformity_factor: float = Field(default=3.0, gt=0)
    stability: Optional[StabilityConfig] = None

    @field_validator("kappas")
    @classmethod
    def _validate_kappas(cls, v: list[float]) -> list[float]:
        return check_kappa_list(v)


class Lemma17Section(FrozenModel):
    """
    A comparison problem τ' ≤ Dτ + κδ(t)Φ(τ).

    `delta` is either a constant or samples on a uniform grid of [0, T].
    `phi = "power"` is Φ(y) = coefficient·y^exponent; `phi = "stress"` is
    the stress-functional Φ with the coefficients of the `stress` table.
    """

    D: float = 0.0
    tau0: float = Field(default=1.0, ge=0)
    T: float = Field(default=1.0, gt=0)
    delta: Union[float, list[float]] = 1.0
    delta_nodes: int = Field(default=201, ge=2)
    phi: Literal["power", "stress"] = "power"
    phi_coefficient: float = Field(default=1.0, gt=0)
    phi_exponent: float = Field(default=2.0, gt=0)
    stress: Optional[StressPhiCoefficients] = None
    kappas: list[float] = []
    n_below: int = Field(
        default=20, ge=0, description="Evenly spaced κ in (0, κ₀) added to the verification grid."
    )

    @model_validator(mode="after")
    def _validate_phi(self):
        if self.phi == "stress" and self.stress is None:
            raise ValueError("phi = 'stress' needs a [lemma17.stress] table")
        if isinstance(self.delta, list):
            if len(self.delta) < 2:
                raise ValueError("sampled delta needs at least two values")
            if any(d < 0 for d in self.delta):
                raise ValueError("δ ≥ 0")
        elif self.delta < 0:
            raise ValueError("δ ≥ 0")
        return self

    def _phi(self) -> Callable[[float], float]:
        if self.phi == "stress":
            return stress_phi(self.stress)
        c, p = self.phi_coefficient, self.phi_exponent
        return lambda y: c * max(float(y), 0.0) ** p

    def to_problem(self) -> BoundProblem:
        if isinstance(self.delta, list):
            times = np.linspace(0.0, self.T, len(self.delta))
            samples = np.array(self.delta)
            delta = lambda t: float(np.interp(t, times, samples))  # noqa: E731
        else:
            times = np.linspace(0.0, self.T, self.delta_nodes)
            value = float(self.delta)
            delta = lambda t: value  # noqa: E731
        return BoundProblem(
            D=self.D,
            delta=delta,
            delta_grid=times,
            Phi=self._phi(),
            tau0=self.tau0,
            T=self.T,
        )

    def kappa_grid(self, result: BoundResult) -> list[float]:
        """Explicit κ values plus `n_below` evenly spaced values below κ₀."""
        grid = list(self.kappas)
        if np.isfinite(result.kappa0) and self.n_below:
            step = result.kappa0 / (self.n_below + 1)
            grid.extend(step * i for i in range(1, self.n_below + 1))
        return sorted(set(grid))


class ExperimentConfig(FrozenModel):
    gas: GasParams
    grid: Grid = Grid(n=128)
    solver: SolverConfig
    initial: InitialDataSpec = InitialDataSpec()
    sweep: Optional[SweepSection] = None
    lemma17: Optional[Lemma17Section] = None

    @model_validator(mode="after")
    def _validate_experiment(self):
        if self.sweep is not None and self.solver.snapshot_every is None:
            raise ValueError(SNAPSHOTS_REQUIRED)
        # raises ConfigValidationError naming the violated data condition
        self.initial.generate(self.grid)
        return self

    def sweep_config(self) -> SweepConfig:
        if self.sweep is None:
            raise ConfigValidationError("the configuration has no [sweep] section")
        section = self.sweep
        return SweepConfig(
            kappas=section.kappas,
            base_initial=self.initial,
            mollify=section.mollify,
            grid=self.grid,
            solver=self.solver,
            gas=self.gas,
            distance_norms=section.distance_norms,
            alpha=section.alpha,
            stability=section.stability,
        )

    def echo(self) -> dict:
        """The parameters as plain JSON data."""
        return self.model_dump(mode="json")

    def config_hash(self) -> str:
        canonical = json.dumps(self.echo(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def _validation_messages(exc: ValidationError) -> list[str]:
    messages = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"])
        message = error["msg"].removeprefix("Value error, ")
        messages.append(f"{location}: {message}" if location else message)
    return messages


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read and validate an experiment file.

    Raises:
        ParseError: the file is missing or is not valid TOML; carries the line.
        ConfigValidationError: a key is unknown or a value violates a condition.
    """
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"configuration file {str(path)!r} does not exist", path=str(path))
    try:
        data = TomlConfigSettingsSource(ExperimentConfig, toml_file=path)()
    except tomllib.TOMLDecodeError as exc:
        match = re.search(r"line (\d+)", str(exc))
        lineno = int(match.group(1)) if match else None
        raise ParseError(f"{path}: {exc}", lineno=lineno, path=str(path)) from exc

    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        messages = _validation_messages(exc)
        raise ConfigValidationError("; ".join(messages), errors=messages) from exc
    logger.debug(f"parsed {path} ({config.config_hash()[:12]})")
    return config
