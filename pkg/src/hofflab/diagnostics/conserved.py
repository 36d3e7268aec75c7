import numpy as np

from hofflab.core.gas import GasParams
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.types import FloatSeries, FrozenModel


class ConservedIntegrals(FrozenModel):
    mass: FloatSeries
    energy: FloatSeries
    momentum: FloatSeries
    pressure_int: FloatSeries
    kinetic_int: FloatSeries
    mass_drift: float
    energy_drift: float
    momentum_drift: float


def _relative_drift(series: np.ndarray, scale: float) -> float:
    drift = float(np.max(np.abs(series - series[0])))
    return drift / scale if scale > 0 else drift


def conserved_integrals(traj: Trajectory, params: GasParams) -> ConservedIntegrals:
    """
    Mass Σρ₀dx, total energy Σρ₀(ũ²/2 + cvθ̃)dx and momentum Σρ₀ũdx per
    snapshot, with ∫p dX = ΣRρ₀θ̃dx and ∫ρu²/2 dX on the side.

    Momentum drift is reported relative to √(2𝓜𝓔), which bounds ∫|ρu|.
    """
    dx = traj.grid.dx
    rho0 = traj.rho0
    u = traj.stack("u")
    theta = traj.stack("theta")

    kinetic = np.sum(rho0 * 0.5 * u**2, axis=-1) * dx
    internal = np.sum(rho0 * params.cv * theta, axis=-1) * dx
    mass = np.full(len(traj), np.sum(rho0) * dx)
    energy = kinetic + internal
    momentum = np.sum(rho0 * u, axis=-1) * dx

    return ConservedIntegrals(
        mass=mass,
        energy=energy,
        momentum=momentum,
        pressure_int=np.sum(params.R * rho0 * theta, axis=-1) * dx,
        kinetic_int=kinetic,
        mass_drift=_relative_drift(mass, float(mass[0])),
        energy_drift=_relative_drift(energy, float(energy[0])),
        momentum_drift=_relative_drift(
            momentum, float(np.sqrt(2 * mass[0] * energy[0]))
        ),
    )


class EnergyBounds(FrozenModel):
    """The energy-derived a-priori bounds on ∫p, ∫ρu²/2 and ∫|ρu|."""

    sup_int_p: float
    bound_int_p: float
    sup_int_kinetic: float
    bound_int_kinetic: float
    sup_int_abs_momentum: float
    bound_int_abs_momentum: float
    passed: bool


def energy_bounds(traj: Trajectory, params: GasParams, rtol: float = 1e-6) -> EnergyBounds:
    """
    sup ∫p ≤ (γ-1)𝓔, sup ∫ρu²/2 ≤ 𝓔 and sup ∫|ρu| ≤ √(2𝓜𝓔), with 𝓔 the
    largest recorded energy.
    """
    integrals = conserved_integrals(traj, params)
    dx = traj.grid.dx
    energy = float(np.max(integrals.energy))
    mass = float(integrals.mass[0])
    abs_momentum = np.sum(traj.rho0 * np.abs(traj.stack("u")), axis=-1) * dx

    values = {
        "sup_int_p": float(np.max(integrals.pressure_int)),
        "bound_int_p": (params.gamma - 1) * energy,
        "sup_int_kinetic": float(np.max(integrals.kinetic_int)),
        "bound_int_kinetic": energy,
        "sup_int_abs_momentum": float(np.max(abs_momentum)),
        "bound_int_abs_momentum": float(np.sqrt(2 * mass * energy)),
    }
    passed = all(
        values[f"sup_{name}"] <= values[f"bound_{name}"] * (1 + rtol)
        for name in ("int_p", "int_kinetic", "int_abs_momentum")
    )
    return EnergyBounds(**values, passed=passed)
