from typing import Any, Union

import numpy as np
from pydantic import ValidationError

from hofflab.core.gas import GasParams
from hofflab.core.state import LagState
from hofflab.errors import BlowupError, ConfigError, LinearSolveError, PositivityError
from hofflab.solver.config import SolverConfig
from hofflab.solver.imex import stable_dt, step
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.logging import get_logger

logger = get_logger(__name__)


def _extrema(state: LagState) -> dict[str, float]:
    return {
        "rho_min": float(np.min(state.rho)),
        "rho_max": float(np.max(state.rho)),
        "theta_min": float(np.min(state.theta)),
        "theta_max": float(np.max(state.theta)),
        "u_max_abs": float(np.max(np.abs(state.u))),
    }


def _coerce_config(config: Union[SolverConfig, dict[str, Any]]) -> SolverConfig:
    if isinstance(config, SolverConfig):
        return config
    try:
        return SolverConfig.model_validate(config)
    except ValidationError as exc:
        raise ConfigError(f"invalid solver configuration: {exc}") from exc


def run(
    initial: LagState,
    params: GasParams,
    config: Union[SolverConfig, dict[str, Any]],
) -> Trajectory:
    """
    Integrate from `initial` to `config.t_end`.

    The step is the smaller of `dt_initial` and `stable_dt`, shortened to
    land exactly on every output time. A step that loses positivity (or
    whose implicit solve fails) is retried with half the step, at most
    `max_halvings` times in a row.

    Raises:
        ConfigError: the configuration is invalid.
        BlowupError: the step was halved `max_halvings` times without success.
    """
    config = _coerce_config(config)
    if initial.t != 0.0:
        raise ConfigError("runs start at t = 0")

    logger.info(
        f"run: n={initial.grid.n} κ={params.kappa!r} T={config.t_end!r} "
        f"order={config.scheme_order}"
    )
    state = initial
    snapshots = [initial]
    times = [0.0]
    dt_history: list[float] = []

    for target in config.output_times():
        while state.t < target:
            remaining = target - state.t
            dt = stable_dt(state, params, config)
            lands = remaining <= dt * (1 + 1e-8)
            if lands:
                dt = remaining

            for _ in range(config.max_halvings + 1):
                try:
                    new_state = step(state, dt, params, config.scheme_order)
                    break
                except (PositivityError, LinearSolveError) as exc:
                    logger.warning(
                        f"step rejected at t={state.t!r} dt={dt!r}: {exc.message}"
                    )
                    lands = False
                    dt = 0.5 * dt
            else:
                raise BlowupError(
                    f"no admissible step after {config.max_halvings} halvings "
                    f"at t={state.t!r}",
                    t=state.t,
                    extrema=_extrema(state),
                )

            if lands:
                # snap onto the output time
                new_state = new_state.evolve(t=target)
            logger.debug(f"step accepted t={new_state.t!r} dt={dt!r}")
            dt_history.append(dt)
            state = new_state
            if config.snapshot_every is None and state.t < target:
                snapshots.append(state)
                times.append(state.t)

        snapshots.append(state)
        times.append(state.t)

    logger.info(f"run finished: {len(dt_history)} steps, {len(snapshots)} snapshots")
    return Trajectory(
        snapshots=snapshots,
        times=np.array(times),
        dt_history=np.array(dt_history),
        params=params,
        config=config,
    )
