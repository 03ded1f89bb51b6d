"""Builders shared by the test modules."""

from pathlib import Path
from typing import Sequence

import numpy as np


def serialize_at2(
    samples: Sequence[float],
    dt: float,
    title: str = "SYNTHETIC 2001, TEST STATION, 000",
    per_line: int = 5,
    legacy_header: bool = False,
) -> str:
    """Write samples in the PEER AT2 layout."""
    samples = list(samples)
    if legacy_header:
        line4 = f"{len(samples)}   {dt:.4f}   NPTS, DT"
    else:
        line4 = f"NPTS=  {len(samples)}, DT=   {dt:.4f} SEC"
    lines = [
        "PEER NGA STRONG MOTION DATABASE RECORD",
        title,
        "ACCELERATION TIME SERIES IN UNITS OF G",
        line4,
    ]
    for start in range(0, len(samples), per_line):
        chunk = samples[start:start + per_line]
        lines.append("  ".join(f"{float(v): .16E}" for v in chunk))
    return "\n".join(lines) + "\n"


def synthetic_record(duration: float = 10.0, dt: float = 0.005, peak_g: float = 0.3) -> np.ndarray:
    """Tapered multi-tone acceleration history in g."""
    t = np.arange(int(round(duration / dt)) + 1) * dt
    envelope = np.sin(np.pi * t / t[-1]) ** 2
    tones = (
        np.sin(2 * np.pi * 1.3 * t)
        + 0.6 * np.sin(2 * np.pi * 2.7 * t + 0.4)
        + 0.3 * np.sin(2 * np.pi * 5.1 * t + 1.1)
    )
    acc = envelope * tones
    return peak_g * acc / np.max(np.abs(acc))


def write_at2(path: Path, samples: Sequence[float], dt: float) -> Path:
    path.write_text(serialize_at2(samples, dt))
    return path


def write_config(path: Path, **values) -> Path:
    lines = []
    for key, value in values.items():
        if isinstance(value, (list, tuple)):
            value = ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n")
    return path
