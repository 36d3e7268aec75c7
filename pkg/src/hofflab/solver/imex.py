"""
One time step of the Lagrangian system

    ∂t(ρ₀/ρ̃) = ∂xũ
    ρ₀ ∂tũ = ∂x(μ(ρ̃/ρ₀)∂xũ) - ∂x(Rρ̃θ̃)
    ρ₀cv ∂tθ̃ = μ(ρ̃/ρ₀)(∂xũ)² - Rρ̃θ̃ ∂xũ + ∂x(κ(ρ̃/ρ₀)∂xθ̃)
    ∂tX = ũ

on the label grid. The state is advanced in specific volume v = ρ₀/ρ̃.

The operator is split into an explicit acoustic part A (specific volume,
pressure gradient, pressure work, particle positions) and an implicit
diffusive part B (viscous and conduction fluxes plus viscous heating, face
coefficients frozen at the start of B). Order 2 is the Strang composition
A(dt/2)·B(dt)·A(dt/2) with a midpoint A and Crank-Nicolson B; order 1 is a
forward-backward Euler A followed by a backward Euler B.

Every u-dependence goes through differences of u, so constant velocity
boosts only translate X. A constant state is a bit-exact fixed point.
"""

from dataclasses import dataclass

import numpy as np

from hofflab.core.gas import GasParams
from hofflab.core.grid import Grid
from hofflab.core.operators import deriv, face_average, face_diffusion, face_heating
from hofflab.core.state import LagState
from hofflab.errors import PositivityError
from hofflab.solver.config import SolverConfig
from hofflab.solver.tridiagonal import implicit_diffusion_solve
from hofflab.utilities.logging import get_logger

logger = get_logger(__name__)


@dataclass
class _Fields:
    v: np.ndarray
    u: np.ndarray
    theta: np.ndarray
    x_pos: np.ndarray


def _pressure(fields: _Fields, rho0: np.ndarray, params: GasParams) -> np.ndarray:
    return params.R * rho0 * fields.theta / fields.v


def _check(v: np.ndarray, theta: np.ndarray, t: float) -> None:
    if not np.all(v > 0):
        raise PositivityError(f"density lost positivity at t={t!r}", field="rho", t=t)
    if not np.all(theta > 0):
        raise PositivityError(
            f"temperature lost positivity at t={t!r}", field="theta", t=t
        )


def _acoustic_midpoint(
    f: _Fields, h: float, rho0: np.ndarray, params: GasParams, grid: Grid, t: float
) -> _Fields:
    heat_capacity = rho0 * params.cv
    du = deriv(f.u, grid)
    p = _pressure(f, rho0, params)

    # half-step predictor for the pressure
    v_half = f.v + 0.5 * h * du
    theta_half = f.theta - 0.5 * h * p * du / heat_capacity
    _check(v_half, theta_half, t)
    p_half = params.R * rho0 * theta_half / v_half

    u_new = f.u - h * deriv(p_half, grid) / rho0
    u_mid = 0.5 * (f.u + u_new)
    du_mid = deriv(u_mid, grid)
    v_new = f.v + h * du_mid
    theta_new = f.theta - h * p_half * du_mid / heat_capacity
    _check(v_new, theta_new, t)
    return _Fields(v=v_new, u=u_new, theta=theta_new, x_pos=f.x_pos + h * u_mid)


def _acoustic_euler(
    f: _Fields, h: float, rho0: np.ndarray, params: GasParams, grid: Grid, t: float
) -> _Fields:
    p = _pressure(f, rho0, params)
    u_new = f.u - h * deriv(p, grid) / rho0
    du_new = deriv(u_new, grid)
    v_new = f.v + h * du_new
    theta_new = f.theta - h * p * du_new / (rho0 * params.cv)
    _check(v_new, theta_new, t)
    return _Fields(v=v_new, u=u_new, theta=theta_new, x_pos=f.x_pos + h * u_new)


def _diffusive(
    f: _Fields,
    h: float,
    rho0: np.ndarray,
    params: GasParams,
    grid: Grid,
    t: float,
    implicitness: float,
) -> _Fields:
    """implicitness 1/2 is Crank-Nicolson, 1 is backward Euler."""
    a_face = face_average(1.0 / f.v)
    visc_face = params.mu * a_face

    du = implicit_diffusion_solve(
        mass=rho0,
        coef_face=visc_face,
        theta_dt=implicitness * h,
        rhs=h * face_diffusion(f.u, visc_face, grid),
        dx=grid.dx,
    )
    u_new = f.u + du
    # the velocity at which the dissipated kinetic energy is evaluated
    u_heat = f.u + implicitness * du
    heating = face_heating(u_heat, visc_face, grid)

    heat_capacity = rho0 * params.cv
    if params.kappa == 0:
        dtheta = h * heating / heat_capacity
    else:
        cond_face = params.kappa * a_face
        dtheta = implicit_diffusion_solve(
            mass=heat_capacity,
            coef_face=cond_face,
            theta_dt=implicitness * h,
            rhs=h * (face_diffusion(f.theta, cond_face, grid) + heating),
            dx=grid.dx,
        )
    theta_new = f.theta + dtheta
    _check(f.v, theta_new, t)
    return _Fields(v=f.v, u=u_new, theta=theta_new, x_pos=f.x_pos)


def step(
    state: LagState, dt: float, params: GasParams, scheme_order: int = 2
) -> LagState:
    """
    Advance `state` by `dt`.

    Raises:
        PositivityError: ρ or θ would cross zero; the step must be rejected.
        LinearSolveError: an implicit system could not be solved.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    grid = state.grid
    rho0 = state.rho0
    fields = _Fields(
        v=state.specific_volume, u=state.u, theta=state.theta, x_pos=state.x_pos
    )
    t = state.t

    if scheme_order == 2:
        fields = _acoustic_midpoint(fields, 0.5 * dt, rho0, params, grid, t)
        fields = _diffusive(fields, dt, rho0, params, grid, t, implicitness=0.5)
        fields = _acoustic_midpoint(fields, 0.5 * dt, rho0, params, grid, t)
    elif scheme_order == 1:
        fields = _acoustic_euler(fields, dt, rho0, params, grid, t)
        fields = _diffusive(fields, dt, rho0, params, grid, t, implicitness=1.0)
    else:
        raise ValueError(f"unsupported scheme order {scheme_order}")

    return LagState(
        t=t + dt,
        rho=rho0 / fields.v,
        u=fields.u,
        theta=fields.theta,
        x_pos=fields.x_pos,
        rho0=rho0,
    )


def semidiscrete_rates(
    state: LagState, params: GasParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Method-of-lines right-hand side (dv/dt, du/dt, dθ/dt, dX/dt) of the
    spatially discrete system that `step` integrates.
    """
    grid = state.grid
    rho0 = state.rho0
    v = state.specific_volume
    a_face = face_average(1.0 / v)
    visc_face = params.mu * a_face
    p = params.R * rho0 * state.theta / v
    du = deriv(state.u, grid)

    dv_dt = du
    du_dt = (face_diffusion(state.u, visc_face, grid) - deriv(p, grid)) / rho0
    dtheta_dt = (
        face_heating(state.u, visc_face, grid)
        - p * du
        + face_diffusion(state.theta, params.kappa * a_face, grid)
    ) / (rho0 * params.cv)
    return dv_dt, du_dt, dtheta_dt, state.u.copy()


def stable_dt(state: LagState, params: GasParams, config: SolverConfig) -> float:
    """
    Step cap for the explicit part: acoustic CFL with the label sound speed
    sqrt(γRθ̃)·ρ̃/ρ₀, plus relative-change caps on θ̃ (pressure work) and on
    ρ₀/ρ̃ (compression).
    """
    grid = state.grid
    dt = config.dt_initial
    ratio = state.rho / state.rho0
    sound = np.sqrt(params.gamma * params.R * state.theta) * ratio
    dt = min(dt, config.cfl_safety * grid.dx / float(np.max(sound)))

    rate = np.max(np.abs(deriv(state.u, grid)) * ratio)
    if rate > 0:
        dt = min(dt, config.cfl_safety / float(rate))
        dt = min(dt, config.cfl_safety * params.cv / (params.R * float(rate)))
    return dt
