from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, WithJsonSchema


def _as_grid_field(value: Any) -> np.ndarray:
    # always copy, so a model never aliases caller-owned memory
    array = np.array(value, dtype=np.float64)
    if array.ndim != 1:
        raise ValueError(f"grid fields must be one-dimensional, got shape {array.shape}")
    array.setflags(write=False)
    return array


def _as_float_series(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    array.setflags(write=False)
    return array


GridField = Annotated[
    np.ndarray,
    BeforeValidator(_as_grid_field),
    PlainSerializer(lambda a: a.tolist(), return_type=list, when_used="json"),
    WithJsonSchema({"type": "array", "items": {"type": "number"}}),
]
"""A read-only float64 field sampled on the periodic label grid."""

FloatSeries = Annotated[
    np.ndarray,
    BeforeValidator(_as_float_series),
    PlainSerializer(lambda a: a.tolist(), return_type=list, when_used="json"),
    WithJsonSchema({"type": "array"}),
]
"""A read-only float64 array of any shape (time series, snapshot stacks)."""


class HoffLabModel(BaseModel):
    model_config = ConfigDict(
        validate_assignment=True,
        extra="forbid",
        arbitrary_types_allowed=True,
    )


class FrozenModel(HoffLabModel):
    model_config = ConfigDict(frozen=True)


__all__ = ["HoffLabModel", "FrozenModel", "GridField", "FloatSeries"]
