"""
Distances between two trajectories on the same label grid and snapshot
times.

`lagrangian_composed` compares the composed fields (ρ̃, θ̃, ũ, X) label by
label, which needs no interpolation. The L²-in-time norms weight each label
by the mean Eulerian volume ½(v_a + v_b), v = ρ₀/ρ̃.
"""

from typing import Literal

import numpy as np
from scipy.integrate import trapezoid

from hofflab.core.operators import deriv
from hofflab.errors import GridMismatch
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.types import FrozenModel

DistanceNorm = Literal["L2L2_rho", "L2L2_theta", "L2L2_u", "L2H1_u", "lagrangian_composed"]
DISTANCE_NORMS: tuple[DistanceNorm, ...] = (
    "L2L2_rho",
    "L2L2_theta",
    "L2L2_u",
    "L2H1_u",
    "lagrangian_composed",
)


class DistanceComponents(FrozenModel):
    L2L2_rho: float
    L2L2_theta: float
    L2L2_u: float
    L2H1_u: float
    lagrangian_composed: float


def _check_compatible(a: Trajectory, b: Trajectory) -> None:
    if a.grid.n != b.grid.n:
        raise GridMismatch(f"grids differ: n={a.grid.n} vs n={b.grid.n}")
    if a.times.shape != b.times.shape or not np.array_equal(a.times, b.times):
        raise GridMismatch("snapshot times differ")


def _space_time_l2(sq: np.ndarray, weight: np.ndarray, a: Trajectory) -> float:
    per_time = np.sum(sq * weight, axis=-1) * a.grid.dx
    if len(a.times) < 2:
        return float(np.sqrt(per_time[0]))
    return float(np.sqrt(trapezoid(per_time, a.times)))


def distance_components(a: Trajectory, b: Trajectory) -> DistanceComponents:
    """
    All distance norms at once.

    Raises:
        GridMismatch: different cell counts or snapshot times.
    """
    _check_compatible(a, b)
    grid = a.grid
    va, vb = a.specific_volumes(), b.specific_volumes()
    weight = 0.5 * (va + vb)
    d_rho = a.stack("rho") - b.stack("rho")
    d_theta = a.stack("theta") - b.stack("theta")
    ua, ub = a.stack("u"), b.stack("u")
    d_u = ua - ub
    d_dxu = deriv(ua, grid) / va - deriv(ub, grid) / vb
    d_x = a.stack("x_pos") - b.stack("x_pos")

    composed = np.sqrt(np.sum(d_rho**2 + d_theta**2 + d_u**2 + d_x**2, axis=-1) * grid.dx)
    return DistanceComponents(
        L2L2_rho=_space_time_l2(d_rho**2, weight, a),
        L2L2_theta=_space_time_l2(d_theta**2, weight, a),
        L2L2_u=_space_time_l2(d_u**2, weight, a),
        L2H1_u=_space_time_l2(d_u**2 + d_dxu**2, weight, a),
        lagrangian_composed=float(np.max(composed)),
    )


def trajectory_distance(a: Trajectory, b: Trajectory, norm: DistanceNorm) -> float:
    if norm not in DISTANCE_NORMS:
        raise ValueError(f"unknown distance norm {norm!r}")
    return getattr(distance_components(a, b), norm)
