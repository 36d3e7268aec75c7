"""Particle-path operations on trajectories: flow map, D_t⁻¹ and R_t."""

from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid

from hofflab.core.operators import flow_jacobian
from hofflab.core.state import LagState
from hofflab.solver.trajectory import Trajectory

FieldExtractor = Callable[[LagState], np.ndarray]


def flow_map_consistency(traj: Trajectory) -> float:
    """max over snapshots and cells of |∂xX - ρ₀/ρ̃|."""
    grid = traj.grid
    return float(
        max(
            np.max(np.abs(flow_jacobian(s.x_pos, grid) - s.specific_volume))
            for s in traj.snapshots
        )
    )


def _sample(traj: Trajectory, f: FieldExtractor) -> np.ndarray:
    return np.stack([np.asarray(f(s), dtype=np.float64) for s in traj.snapshots])


def material_antiderivative(traj: Trajectory, f: FieldExtractor) -> np.ndarray:
    """
    D_t⁻¹f along each particle label: the cumulative trapezoid integral in
    time of f̃, shape (m, n), zero at t = 0.
    """
    values = _sample(traj, f)
    if len(traj) == 1:
        return np.zeros_like(values)
    return cumulative_trapezoid(values, x=traj.times, axis=0, initial=0)


def material_remainder(traj: Trajectory, f: FieldExtractor) -> np.ndarray:
    """R_t f = f - D_t⁻¹(D_t f), with D_t the per-label time derivative."""
    values = _sample(traj, f)
    if len(traj) < 2:
        return values
    edge_order = 2 if len(traj) >= 3 else 1
    rate = np.gradient(values, traj.times, axis=0, edge_order=edge_order)
    return values - cumulative_trapezoid(rate, x=traj.times, axis=0, initial=0)


def galilean_normalize(state: LagState) -> LagState:
    """Subtract the mean velocity Σρ₀ũ/Σρ₀ so the momentum integral vanishes."""
    mean_velocity = float(np.sum(state.rho0 * state.u) / np.sum(state.rho0))
    return state.evolve(u=state.u - mean_velocity)
