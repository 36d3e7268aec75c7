from typing import Literal

import numpy as np
from pydantic import model_validator

from hofflab.core.gas import GasParams
from hofflab.core.grid import Grid
from hofflab.core.state import LagState
from hofflab.solver.config import SolverConfig
from hofflab.utilities.types import FrozenModel, FloatSeries

FieldName = Literal["rho", "u", "theta", "x_pos"]


class Trajectory(FrozenModel):
    """Time-stamped snapshots of one run, with the accepted step sizes."""

    snapshots: list[LagState]
    times: FloatSeries
    dt_history: FloatSeries
    params: GasParams
    config: SolverConfig

    @model_validator(mode="after")
    def _validate_times(self):
        if len(self.snapshots) == 0:
            raise ValueError("a trajectory needs at least one snapshot")
        if self.times.shape != (len(self.snapshots),):
            raise ValueError("times must match the snapshots one to one")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        n = self.snapshots[0].rho0.shape[0]
        if any(s.rho0.shape[0] != n for s in self.snapshots):
            raise ValueError("all snapshots must live on the same grid")
        return self

    @property
    def grid(self) -> Grid:
        return self.snapshots[0].grid

    @property
    def rho0(self) -> np.ndarray:
        return self.snapshots[0].rho0

    @property
    def t_final(self) -> float:
        return float(self.times[-1])

    def stack(self, name: FieldName) -> np.ndarray:
        """Field values of every snapshot as an (m, n) array."""
        return np.stack([getattr(s, name) for s in self.snapshots])

    def specific_volumes(self) -> np.ndarray:
        """ρ₀/ρ̃ for every snapshot, the Eulerian measure weights."""
        return self.rho0 / self.stack("rho")

    def __len__(self) -> int:
        return len(self.snapshots)
