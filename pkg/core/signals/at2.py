"""
PEER NGA AT2 ground-motion reader.

Layout: three free-text header lines, a fourth line declaring NPTS and DT,
then whitespace-separated acceleration samples in g.
"""

import re
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from core.errors import (
    IoFailure,
    MalformedHeader,
    MalformedSample,
    NonFiniteSample,
    SampleCountMismatch,
)
from core.logger import get_logger
from core.schema.series import GroundMotion, TimeSeries, Unit

logger = get_logger(__name__)

HEADER_LINES = 3

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eEdD][-+]?\d+)?"
_NPTS_KEY = re.compile(rf"NPTS\s*=\s*({_NUMBER})", re.IGNORECASE)
_DT_KEY = re.compile(rf"DT\s*=\s*({_NUMBER})", re.IGNORECASE)
_ANY_NUMBER = re.compile(_NUMBER)


def _to_float(token: str) -> float:
    # Fortran exports occasionally use D exponents
    return float(token.replace("D", "E").replace("d", "e"))


def _parse_header(line: str) -> Tuple[int, float]:
    """Extract (NPTS, DT) from the fourth line.

    Keyword form ("NPTS=  4, DT= .005 SEC") is tried first; older exports
    ("4  .005  NPTS, DT") fall back to the first two numeric tokens.
    """
    npts_match = _NPTS_KEY.search(line)
    dt_match = _DT_KEY.search(line)
    if npts_match and dt_match:
        npts_tok, dt_tok = npts_match.group(1), dt_match.group(1)
    else:
        tokens = _ANY_NUMBER.findall(line)
        if len(tokens) < 2:
            raise MalformedHeader(f"no NPTS/DT tokens in header line: {line.strip()!r}")
        npts_tok, dt_tok = tokens[0], tokens[1]

    try:
        npts_value = _to_float(npts_tok)
        dt = _to_float(dt_tok)
    except ValueError:
        raise MalformedHeader(f"non-numeric NPTS/DT in header line: {line.strip()!r}") from None

    if not npts_value.is_integer() or npts_value < 1:
        raise MalformedHeader(f"NPTS must be a positive integer, got {npts_tok}")
    if not np.isfinite(dt) or dt <= 0:
        raise MalformedHeader(f"DT must be a positive number, got {dt_tok}")
    return int(npts_value), dt


def _parse_samples(lines: List[str]) -> np.ndarray:
    values = []
    for lineno, line in enumerate(lines, start=HEADER_LINES + 2):
        for token in line.split():
            try:
                values.append(_to_float(token))
            except ValueError:
                raise MalformedSample(f"line {lineno}: not a number: {token!r}") from None
    return np.asarray(values, dtype=float)


def parse_at2(text: str, record_id: str = "") -> GroundMotion:
    """
    Parse the full contents of an AT2 file.

    Returns a GroundMotion whose acceleration is in g, sampled at the declared DT.
    """
    lines = text.splitlines()
    if len(lines) < HEADER_LINES + 1:
        raise MalformedHeader(f"expected at least {HEADER_LINES + 1} lines, got {len(lines)}")

    npts, dt = _parse_header(lines[HEADER_LINES])
    samples = _parse_samples(lines[HEADER_LINES + 1:])

    if samples.size != npts:
        raise SampleCountMismatch(f"header declares NPTS={npts} but {samples.size} samples were read")
    bad = np.flatnonzero(~np.isfinite(samples))
    if bad.size:
        raise NonFiniteSample(f"sample {int(bad[0])} is {samples[bad[0]]}")

    if not record_id:
        record_id = lines[1].strip() or "record"

    logger.debug(f"[AT2] {record_id}: npts={npts} dt={dt}")
    return GroundMotion(
        record_id=record_id,
        accel=TimeSeries.create(samples, dt, Unit.G),
        source_dt=dt,
    )


def load_at2(path: Union[str, Path], record_id: str = "") -> GroundMotion:
    """Read an AT2 file from disk; the record id defaults to the file stem."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    motion = parse_at2(text, record_id=record_id or path.stem)
    logger.info(
        f"[AT2] Loaded {motion.record_id}: {motion.npts} samples at dt={motion.source_dt} s"
    )
    return motion
