from typing import Literal, Optional

from pydantic import Field, field_validator, model_validator

from hofflab.utilities.types import FrozenModel


class SolverConfig(FrozenModel):
    dt_initial: float = Field(description="Largest step the controller may take.")
    t_end: float = Field(description="Final time T.")
    cfl_safety: float = Field(
        default=0.5, description="Factor in (0, 1] applied to the explicit step caps."
    )
    snapshot_every: Optional[float] = Field(
        default=None,
        description="Output interval in time units. None stores every accepted step.",
    )
    scheme_order: Literal[1, 2] = Field(
        default=2,
        description="1: IMEX Euler. 2: Strang-split IMEX midpoint/Crank-Nicolson.",
    )
    max_halvings: int = Field(
        default=20, ge=0, description="Consecutive dt halvings before giving up."
    )

    @field_validator("dt_initial")
    @classmethod
    def _validate_dt(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("dt_initial > 0")
        return v

    @field_validator("t_end")
    @classmethod
    def _validate_t_end(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("t_end > 0")
        return v

    @field_validator("cfl_safety")
    @classmethod
    def _validate_cfl(cls, v: float) -> float:
        if not 0 < v <= 1:
            raise ValueError("0 < cfl_safety ≤ 1")
        return v

    @field_validator("snapshot_every")
    @classmethod
    def _validate_snapshot_every(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v > 0:
            raise ValueError("snapshot_every > 0")
        return v

    @model_validator(mode="after")
    def _validate_cadence(self):
        if self.snapshot_every is not None and self.snapshot_every > self.t_end:
            raise ValueError("snapshot_every must not exceed t_end")
        return self

    def output_times(self) -> list[float]:
        """Snapshot times after t = 0, always ending at t_end."""
        if self.snapshot_every is None:
            return [self.t_end]
        times = []
        k = 1
        # k·Δ by multiplication, never by accumulation
        while k * self.snapshot_every < self.t_end * (1 - 1e-12):
            times.append(k * self.snapshot_every)
            k += 1
        times.append(self.t_end)
        return times
