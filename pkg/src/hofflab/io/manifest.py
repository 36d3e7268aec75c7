import hashlib
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Union

from pydantic import Field

import hofflab
from hofflab.utilities.types import HoffLabModel


class OutputFile(HoffLabModel):
    path: str
    sha256: str


def file_digest(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class RunManifest(HoffLabModel):
    """
    What a command was asked to do and what it wrote. Everything but
    `started_at` and `wall_clock` is a function of the configuration.
    """

    command: str
    config_path: str
    config_hash: str
    parameters: dict[str, Any]
    version: str = Field(default_factory=lambda: hofflab.__version__)
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    wall_clock: float = 0.0
    outputs: list[OutputFile] = []

    def add_output(self, path: Union[str, Path]) -> None:
        path = Path(path)
        self.outputs = [*self.outputs, OutputFile(path=path.name, sha256=file_digest(path))]

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2) + "\n")
        return path
