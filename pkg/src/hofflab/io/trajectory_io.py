"""
Text persistence for trajectories.

    # hofflab-trajectory v1
    # n 128
    # snapshots 11
    # params {"mu": 1.0, ...}
    # config {"dt_initial": 0.001, ...}
    # dt_history 0x1.0624dd2f1a9fcp-10 ...
    # rho0 0x1.0000000000000p+0 ...
    t rho[0..n) u[0..n) theta[0..n) x_pos[0..n)

One data row per snapshot, every value written with `float.hex`, so a
round trip is bit-exact.
"""

from pathlib import Path
from typing import Iterable, Union

import numpy as np
from pydantic import ValidationError

from hofflab.core.gas import GasParams
from hofflab.core.state import LagState
from hofflab.errors import FormatError, HoffLabError
from hofflab.solver.config import SolverConfig
from hofflab.solver.trajectory import Trajectory
from hofflab.utilities.logging import get_logger

logger = get_logger(__name__)

MAGIC = "# hofflab-trajectory v1"
ROW_FIELDS = ("rho", "u", "theta", "x_pos")


def _hex(values: Iterable[float]) -> str:
    return " ".join(float(v).hex() for v in values)


def _unhex(tokens: list[str], row: int | None = None) -> np.ndarray:
    try:
        return np.array([float.fromhex(token) for token in tokens], dtype=np.float64)
    except ValueError as exc:
        raise FormatError(f"unreadable value: {exc}", row=row) from exc


def write_trajectory(traj: Trajectory, path: Union[str, Path]) -> Path:
    path = Path(path)
    lines = [
        MAGIC,
        f"# n {traj.grid.n}",
        f"# snapshots {len(traj)}",
        f"# params {traj.params.model_dump_json()}",
        f"# config {traj.config.model_dump_json()}",
        f"# dt_history {_hex(traj.dt_history)}".rstrip(),
        f"# rho0 {_hex(traj.rho0)}",
    ]
    for snapshot in traj.snapshots:
        values = np.concatenate([[snapshot.t], *(getattr(snapshot, f) for f in ROW_FIELDS)])
        lines.append(_hex(values))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    logger.debug(f"wrote {len(traj)} snapshots to {path}")
    return path


def _header(lines: list[str], index: int, key: str) -> str:
    if index >= len(lines) or not lines[index].startswith(f"# {key}"):
        raise FormatError(f"header line {index + 1} should hold {key!r}")
    return lines[index][len(f"# {key}") :].strip()


def read_trajectory(path: Union[str, Path]) -> Trajectory:
    """
    Raises:
        FormatError: wrong version line, malformed header, or a data row of
            the wrong length; data-row errors carry the snapshot index.
    """
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != MAGIC:
        raise FormatError(f"{path} is not a hofflab-trajectory v1 file")

    try:
        n = int(_header(lines, 1, "n"))
        count = int(_header(lines, 2, "snapshots"))
        params = GasParams.model_validate_json(_header(lines, 3, "params"))
        config = SolverConfig.model_validate_json(_header(lines, 4, "config"))
    except (ValueError, ValidationError) as exc:
        raise FormatError(f"malformed header in {path}: {exc}") from exc
    dt_history = _unhex(_header(lines, 5, "dt_history").split())
    rho0 = _unhex(_header(lines, 6, "rho0").split())
    if rho0.shape[0] != n:
        raise FormatError(f"rho0 has {rho0.shape[0]} values, header says n = {n}")

    rows = lines[7:]
    if len(rows) != count:
        raise FormatError(f"{len(rows)} snapshot rows, header says {count}")

    snapshots = []
    for row, line in enumerate(rows):
        values = _unhex(line.split(), row)
        if values.shape[0] != 1 + len(ROW_FIELDS) * n:
            raise FormatError(
                f"row {row} has {values.shape[0] - 1} field values, expected "
                f"{len(ROW_FIELDS)}×{n}",
                row=row,
            )
        fields = dict(zip(ROW_FIELDS, np.split(values[1:], len(ROW_FIELDS))))
        try:
            snapshots.append(LagState(t=float(values[0]), rho0=rho0, **fields))
        except (HoffLabError, ValidationError) as exc:
            raise FormatError(f"row {row} is not a valid state: {exc}", row=row) from exc

    try:
        return Trajectory(
            snapshots=snapshots,
            times=[s.t for s in snapshots],
            dt_history=dt_history,
            params=params,
            config=config,
        )
    except ValidationError as exc:
        raise FormatError(f"{path} does not describe a trajectory: {exc}") from exc
