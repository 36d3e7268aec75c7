from typing import Optional

import numpy as np
import pandas as pd
import prefect
import prefect.artifacts
import prefect.cache_policies
from prefect.context import FlowRunContext, TaskRunContext

import hofflab


def prefect_task(*args, **kwargs):
    """
    A decorator that creates a Prefect task with HoffLab defaults.

    Simulation results hold large numpy payloads, so they are neither cached
    nor persisted: a task's result lives only in memory for the enclosing flow.
    """

    kwargs.setdefault("log_prints", hofflab.settings.log_prints)
    kwargs.setdefault("cache_policy", prefect.cache_policies.NONE)
    kwargs.setdefault("persist_result", False)

    return prefect.task(*args, **kwargs)


def prefect_flow(*args, **kwargs):
    """
    A decorator that creates a Prefect flow with HoffLab defaults
    """

    kwargs.setdefault("log_prints", hofflab.settings.log_prints)
    kwargs.setdefault("persist_result", False)
    kwargs.setdefault("validate_parameters", False)

    return prefect.flow(*args, **kwargs)


def create_table_artifact(
    key: str,
    frame: pd.DataFrame,
    description: Optional[str] = None,
) -> None:
    """
    Attach a table to the current flow or task run. Outside a run this does
    nothing.
    """
    if FlowRunContext.get() is None and TaskRunContext.get() is None:
        return
    # JSON has no NaN or infinity
    finite = frame.replace([np.inf, -np.inf], np.nan).astype(object)
    finite = finite.where(finite.notna(), None)
    prefect.artifacts.create_table_artifact(
        table=finite.to_dict(orient="records"),
        key=key,
        description=description,
    )
