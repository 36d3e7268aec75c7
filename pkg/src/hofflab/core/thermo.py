from typing import Union

import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.grid import Grid
from hofflab.core.operators import deriv
from hofflab.core.state import LagState
from hofflab.errors import DomainError
from hofflab.utilities.types import FrozenModel, GridField


class DerivedFields(FrozenModel):
    p: GridField
    e: GridField
    Etot: GridField
    s: GridField
    sigma: GridField


def stress(
    rho: np.ndarray,
    u: np.ndarray,
    theta: np.ndarray,
    rho0: np.ndarray,
    params: GasParams,
    grid: Grid,
) -> np.ndarray:
    """Lagrangian Cauchy stress σ̃ = μ(ρ̃/ρ₀)D(ũ) - Rρ̃θ̃; accepts snapshot stacks."""
    return params.mu * (rho / rho0) * deriv(u, grid) - params.R * rho * theta


def thermo(state: LagState, params: GasParams) -> DerivedFields:
    """
    Pressure, internal and total energy, entropy and stress of a state.
    Positivity of ρ and θ is guaranteed by `LagState`.
    """
    p = params.R * state.rho * state.theta
    e = params.cv * state.theta
    return DerivedFields(
        p=p,
        e=e,
        Etot=0.5 * state.u**2 + e,
        s=params.cv * np.log(state.theta) - params.R * np.log(state.rho),
        sigma=stress(state.rho, state.u, state.theta, state.rho0, params, state.grid),
    )


def entropy_h(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """h(x) = x - 1 - ln x, nonnegative and zero only at x = 1."""
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(arr > 0):
        raise DomainError(
            "entropy_h is defined for x > 0 only", minimum=float(np.min(arr))
        )
    out = arr - 1.0 - np.log(arr)
    if np.ndim(x) == 0:
        return float(out)
    return out


def relative_entropy_density(state: LagState, params: GasParams) -> np.ndarray:
    """Per-cell ρ₀[cv·h(θ̃) + R·h(1/ρ̃)], the label density of ∫ρ[cv h(θ) + R h(1/ρ)]."""
    return state.rho0 * (
        params.cv * entropy_h(state.theta) + params.R * entropy_h(1.0 / state.rho)
    )
