"""
CSV persistence for simulation records and exported curves.

Files use `,` separators, `\\n` newlines and 17 significant digits, so
reading back reproduces every float64 bit for bit.
"""

from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Union

import numpy as np

from core.errors import IoFailure, LengthMismatch, SchemaMismatch
from core.logger import get_logger
from core.schema.record import COLUMNS, SimulationRecord

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def write_columns(columns: Mapping[str, np.ndarray], path: PathLike) -> Path:
    """Write named equal-length columns, in mapping order, to a CSV file."""
    path = Path(path)
    names = list(columns)
    if not names:
        raise SchemaMismatch("no columns to write")
    data = [np.asarray(columns[name], dtype=float).reshape(-1) for name in names]
    n = data[0].shape[0]
    for name, values in zip(names, data):
        if values.shape[0] != n:
            raise LengthMismatch(f"column {name} has {values.shape[0]} rows, expected {n}")

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            np.savetxt(
                fh,
                np.column_stack(data) if n else np.empty((0, len(names))),
                fmt=FLOAT_FORMAT,
                delimiter=",",
                newline="\n",
                header=",".join(names),
                comments="",
            )
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e

    logger.debug(f"[CSV] Wrote {n} rows x {len(names)} columns to {path}")
    return path


def read_columns(
    path: PathLike, required: Optional[Iterable[str]] = ("t",)
) -> Dict[str, np.ndarray]:
    """Read a CSV written by write_columns; `required` names must be present."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            names = [h.strip() for h in header.split(",")] if header else []
            if required:
                missing = [c for c in required if c not in names]
                if missing:
                    raise SchemaMismatch(f"{path}: missing columns {missing}")
            if len(set(names)) != len(names):
                raise SchemaMismatch(f"{path}: duplicate column names in header")
            data = np.loadtxt(fh, delimiter=",", dtype=float, ndmin=2)
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise SchemaMismatch(f"{path}: unparseable rows: {e}") from e

    if data.size == 0:
        data = np.empty((0, len(names)))
    if data.shape[1] != len(names):
        raise SchemaMismatch(f"{path}: header has {len(names)} columns, rows have {data.shape[1]}")
    return {name: data[:, i].copy() for i, name in enumerate(names)}


def write_csv(record: SimulationRecord, path: PathLike) -> Path:
    """Persist the logged columns of a simulation record."""
    path = write_columns({c: record.columns[c] for c in COLUMNS}, path)
    logger.info(f"[CSV] Saved {len(record)} rows to {path}")
    return path


def read_csv(path: PathLike) -> Dict[str, np.ndarray]:
    """Read a simulation CSV; at least the time column must be present."""
    return read_columns(path, required=("t",))


def read_record(path: PathLike) -> SimulationRecord:
    """Read a simulation CSV that must carry the full record schema."""
    return SimulationRecord(columns=read_columns(path, required=COLUMNS))
