from typing import Any

import numpy as np
from pydantic import Field, model_validator

from hofflab.core.grid import Grid
from hofflab.errors import PositivityError
from hofflab.utilities.types import FrozenModel, GridField


def _check_positive(name: str, field: np.ndarray) -> None:
    if not np.all(field > 0):
        bad = int(np.flatnonzero(~(field > 0))[0])
        raise PositivityError(
            f"{name} must be strictly positive (cell {bad} holds {field[bad]!r})",
            field=name,
            cell=bad,
            value=float(field[bad]),
        )


class LagState(FrozenModel):
    """
    Fields on the Lagrangian label grid at one instant.

    `rho`, `u` and `theta` are the composed fields ρ̃ = ρ(t, X(t, ·)) etc.,
    `x_pos` the particle positions X(t, ·) and `rho0` the reference density,
    frozen at t = 0.
    """

    t: float = 0.0
    rho: GridField
    u: GridField
    theta: GridField
    x_pos: GridField
    rho0: GridField

    @model_validator(mode="after")
    def _validate_fields(self):
        n = self.rho0.shape[0]
        for name in ("rho", "u", "theta", "x_pos"):
            if getattr(self, name).shape[0] != n:
                raise ValueError(
                    f"{name} has {getattr(self, name).shape[0]} cells, rho0 has {n}"
                )
        _check_positive("rho0", self.rho0)
        _check_positive("rho", self.rho)
        _check_positive("theta", self.theta)
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.x_pos))):
            raise PositivityError("velocity or particle positions are not finite")
        return self

    @classmethod
    def initial(cls, rho0: Any, u0: Any, theta0: Any) -> "LagState":
        """The state at t = 0: X is the identity and ρ̃ = ρ₀."""
        rho0 = np.asarray(rho0, dtype=np.float64)
        grid = Grid(n=rho0.shape[0])
        return cls(
            t=0.0, rho=rho0, u=u0, theta=theta0, x_pos=grid.cell_centers, rho0=rho0
        )

    @property
    def grid(self) -> Grid:
        return Grid(n=self.rho0.shape[0])

    @property
    def specific_volume(self) -> np.ndarray:
        """ρ₀/ρ̃, the Jacobian ∂xX of the flow map."""
        return self.rho0 / self.rho

    def evolve(self, **changes: Any) -> "LagState":
        """A validated copy with some fields replaced."""
        values = {name: getattr(self, name) for name in type(self).model_fields}
        values.update(changes)
        return type(self)(**values)

    def boosted(self, velocity: float) -> "LagState":
        return self.evolve(u=self.u + velocity)


class InitialFields(FrozenModel):
    """Initial data (ρ₀, u₀, θ₀) sampled on the label grid."""

    rho0: GridField
    u0: GridField
    theta0: GridField
    ill_prepared: bool = Field(
        default=False,
        description="Set for data that is deliberately not smooth (sampled jumps).",
    )

    @model_validator(mode="after")
    def _validate_fields(self):
        n = self.rho0.shape[0]
        if self.u0.shape[0] != n or self.theta0.shape[0] != n:
            raise ValueError("rho0, u0 and theta0 must have the same number of cells")
        _check_positive("rho0", self.rho0)
        _check_positive("theta0", self.theta0)
        return self

    @property
    def grid(self) -> Grid:
        return Grid(n=self.rho0.shape[0])

    def to_state(self) -> LagState:
        return LagState.initial(self.rho0, self.u0, self.theta0)
