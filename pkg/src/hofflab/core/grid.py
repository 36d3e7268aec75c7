import numpy as np
from pydantic import Field

from hofflab.utilities.types import FrozenModel


class Grid(FrozenModel):
    """
    Uniform discretization of the unit torus [0, 1) in the Lagrangian label
    coordinate. All fields are collocated at cell centers.
    """

    n: int = Field(ge=8, description="Number of cells. Powers of two are preferred.")

    @property
    def dx(self) -> float:
        return 1.0 / self.n

    @property
    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.n, dtype=np.float64) + 0.5) / self.n

    def integrate(self, f: np.ndarray):
        """Label-measure quadrature Σ f·dx (last axis)."""
        return np.sum(f, axis=-1) * self.dx
