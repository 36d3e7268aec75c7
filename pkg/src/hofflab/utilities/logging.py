import logging
from functools import lru_cache
from typing import Optional

import prefect.logging.configuration

ROOT = "hofflab"


def configure_logging(level: str) -> None:
    """
    Re-run prefect's logging setup, so prefect picks up its current level,
    and set the level of the `hofflab` logger.
    """
    prefect.logging.configuration.setup_logging()
    logging.getLogger(ROOT).setLevel(level)


@lru_cache()
def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    The `hofflab` logger, or one of its children.

    Module names are used as they are; any other name is attached below
    `hofflab`:

        get_logger("hofflab.solver.integrate")  # hofflab.solver.integrate
        get_logger("sweep")                     # hofflab.sweep
    """
    root = logging.getLogger(ROOT)
    if not name or name == ROOT:
        return root
    if name.startswith(f"{ROOT}."):
        return logging.getLogger(name)
    return root.getChild(name)
