"""Estimated order of convergence from refinement studies."""

from typing import Optional

import numpy as np

from hofflab.utilities.types import HoffLabModel


class EOCRecorder(HoffLabModel):
    """
    Collects (resolution, error) pairs and fits error ~ C * h**p.

    Example:
        ```python
        eoc = EOCRecorder()
        for n in (64, 128, 256):
            eoc.add_data_point(1.0 / n, error_for(n))
        assert eoc.order_estimate() >= 2 - 0.5
        ```
    """

    resolutions: list[float] = []
    errors: list[float] = []

    def add_data_point(self, h: float, error: float) -> None:
        self.resolutions = [*self.resolutions, float(h)]
        self.errors = [*self.errors, float(error)]

    def order_estimate(self) -> float:
        if len(self.errors) < 2:
            raise ValueError("at least two data points are needed for an order estimate")
        h = np.asarray(self.resolutions)
        e = np.asarray(self.errors)
        if np.any(e <= 0):
            return float("inf")
        slope, _ = np.polyfit(np.log(h), np.log(e), 1)
        return float(slope)

    def max_error(self) -> float:
        return float(max(self.errors)) if self.errors else 0.0

    def pairwise_orders(self) -> list[float]:
        h = np.asarray(self.resolutions)
        e = np.asarray(self.errors)
        return [
            float(np.log(e[i] / e[i + 1]) / np.log(h[i] / h[i + 1]))
            for i in range(len(e) - 1)
        ]

    def __str__(self) -> str:
        lines = ["h\terror\torder"]
        orders: list[Optional[float]] = [None, *self.pairwise_orders()]
        for h, e, p in zip(self.resolutions, self.errors, orders):
            lines.append(f"{h:.4e}\t{e:.4e}\t{'-' if p is None else f'{p:.2f}'}")
        return "\n".join(lines)


def richardson_order(coarse_difference: float, fine_difference: float, ratio: float = 2.0) -> float:
    """
    Observed order from three solutions refined by `ratio`, given the norms of
    the successive differences |u_h - u_{h/r}| and |u_{h/r} - u_{h/r^2}|.
    """
    if coarse_difference <= 0 or fine_difference <= 0:
        return float("inf")
    return float(np.log(coarse_difference / fine_difference) / np.log(ratio))


def log_log_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log(y) against log(x) over the positive pairs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
    if mask.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(x[mask]), np.log(y[mask]), 1)
    return float(slope)
