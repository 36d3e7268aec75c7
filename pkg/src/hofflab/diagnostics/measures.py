"""
Quadratures shared by the diagnostics.

Eulerian integrals are evaluated on the label grid through the change of
variables ∫g dX = Σ g̃·(ρ₀/ρ̃)·dx, and Eulerian derivatives as
∂x g = D(g̃)·ρ̃/ρ₀. Sup-norms are grid maxima.
"""

from typing import Literal

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from hofflab.core.grid import Grid
from hofflab.core.operators import deriv
from hofflab.errors import InsufficientSnapshots

Measure = Literal["eulerian", "label"]


def space_integral(
    g: np.ndarray, volumes: np.ndarray, grid: Grid, measure: Measure = "eulerian"
) -> np.ndarray:
    if measure == "label":
        return np.sum(g, axis=-1) * grid.dx
    return np.sum(g * volumes, axis=-1) * grid.dx


def space_derivative(
    g: np.ndarray, volumes: np.ndarray, grid: Grid, measure: Measure = "eulerian"
) -> np.ndarray:
    if measure == "label":
        return deriv(g, grid)
    return deriv(g, grid) / volumes


def interior_times(times: np.ndarray) -> np.ndarray:
    """Snapshot times with a neighbour on both sides."""
    return times[1:-1]


def time_derivative(values: np.ndarray, times: np.ndarray) -> np.ndarray:
    """
    Per-label time derivative at the interior snapshots `times[1:-1]`, by
    centered differences. The first and last snapshot get no value.

    Raises:
        InsufficientSnapshots: fewer than 3 snapshots.
    """
    if len(times) < 3:
        raise InsufficientSnapshots(
            "time derivatives need at least 3 snapshots", available=len(times)
        )
    return np.gradient(values, times, axis=0)[1:-1]


def time_integral(series: np.ndarray, times: np.ndarray) -> float:
    if len(times) < 2:
        return 0.0
    return float(trapezoid(series, times, axis=0))


def cumulative_time_integral(series: np.ndarray, times: np.ndarray) -> np.ndarray:
    if len(times) < 2:
        return np.zeros_like(series)
    return cumulative_trapezoid(series, times, axis=0, initial=0)


def time_weight(times: np.ndarray) -> np.ndarray:
    """w(t) = min(1, t)."""
    return np.minimum(1.0, times)


def l2_norm(g: np.ndarray, volumes: np.ndarray, grid: Grid) -> np.ndarray:
    return np.sqrt(space_integral(g**2, volumes, grid))
