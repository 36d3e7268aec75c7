import copy
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Literal, Optional, Union

import prefect.settings
from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from hofflab.utilities.logging import configure_logging

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

# HoffLab settings that are forwarded to prefect while they differ from it
PREFECT_SETTINGS = {"prefect_log_level": prefect.settings.PREFECT_LOGGING_LEVEL}


def _env_files() -> Union[str, tuple[str, ...]]:
    if os.getenv("HOFFLAB_TEST_MODE"):
        return ""
    return ("~/.hofflab/.env", ".env")


class HoffLabSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="HOFFLAB_",
        env_file=_env_files(),
        extra="ignore",
        arbitrary_types_allowed=True,
        validate_assignment=True,
    )


class Settings(HoffLabSettings):
    home_path: Path = Field(
        default="~/.hofflab",
        description="Directory holding the user's `.env` file.",
        validate_default=True,
    )
    output_dir: Path = Field(
        default=Path("hofflab-output"),
        description="Directory receiving trajectories, reports, manifests and "
        "plot scripts when a command is given no --out.",
    )

    log_level: LogLevel = Field(
        default="INFO", description="The log level of the `hofflab` logger."
    )
    log_prints: bool = Field(
        False,
        description="Whether to log prints inside sweep flows to the Prefect logger.",
    )

    sweep_max_workers: int = Field(
        default=4,
        ge=1,
        description="Threads used to run the independent simulations of a sweep. "
        "Results are merged in κ order, so output does not depend on this value.",
    )

    prefect_log_level: LogLevel = Field(
        default="WARNING",
        description="The log level for Prefect.",
        alias="PREFECT_LOGGING_LEVEL",
    )

    _prefect_context: Optional[Any] = None

    @field_validator("home_path", mode="before")
    def _validate_home_path(cls, v: Union[str, Path]) -> Path:
        v = Path(v).expanduser()
        v.mkdir(parents=True, exist_ok=True)
        return v

    @model_validator(mode="after")
    def _apply_runtime_settings(self):
        """
        Prefect reads its settings from a context, so changed prefect
        settings are applied by (re)opening a temporary settings context.
        """
        if self._prefect_context is not None:
            self._prefect_context.__exit__(None, None, None)
            self._prefect_context = None

        overrides = {
            setting: getattr(self, name)
            for name, setting in PREFECT_SETTINGS.items()
            if setting.value() != getattr(self, name)
        }
        if overrides:
            self._prefect_context = prefect.settings.temporary_settings(overrides)
            self._prefect_context.__enter__()

        configure_logging(self.log_level)
        return self


settings = Settings()


@contextmanager
def temporary_settings(**kwargs: Any):
    """
    Temporarily override HoffLab setting values.

    Example:
        ```python
        import hofflab
        from hofflab.settings import temporary_settings

        with temporary_settings(sweep_max_workers=1):
            assert hofflab.settings.sweep_max_workers == 1
        ```
    """
    saved = copy.deepcopy(settings.model_dump())
    unknown = [attr for attr in kwargs if attr not in saved]
    if unknown:
        raise AttributeError(f"Setting {unknown[0]} does not exist.")

    try:
        for attr, value in kwargs.items():
            setattr(settings, attr, value)
        yield
    finally:
        for attr in kwargs:
            setattr(settings, attr, saved[attr])
