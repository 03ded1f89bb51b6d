"""
Offline reports: NRMSE between two CSV files and Bode-curve exports.
"""

from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from core.errors import ConfigurationError, SchemaMismatch, UnknownSystem
from core.logger import get_logger
from core.lti.filters import butterworth2_lowpass
from core.lti.systems import (
    TransferFunction,
    freq_response,
    tf_shake_table_acceleration,
    tf_shake_table_displacement,
)
from core.lti import polynomials as poly
from core.schema.record import COLUMN_UNITS
from core.schema.series import TimeSeries, Unit
from core.schemas import NrmseReport
from core.signals.csv_io import read_columns, write_columns
from core.signals.processing import nrmse

logger = get_logger(__name__)

BODE_COLUMNS = ("omega_rad_s", "mag", "phase_rad")

PathLike = Union[str, Path]


def _column_series(columns: Dict[str, np.ndarray], name: str, path: PathLike) -> TimeSeries:
    if name not in columns:
        raise SchemaMismatch(f"{path}: no column {name!r}")
    t = columns["t"]
    dt = float(t[1] - t[0]) if t.size > 1 else 1.0
    return TimeSeries.create(columns[name], dt, COLUMN_UNITS.get(name, Unit.NONE))


def run_nrmse(ref_csv: PathLike, meas_csv: PathLike, column: str) -> NrmseReport:
    """NRMSE of `column` in meas_csv against the same column in ref_csv."""
    ref_cols = read_columns(ref_csv, required=("t", column))
    meas_cols = read_columns(meas_csv, required=("t", column))
    reference = _column_series(ref_cols, column, ref_csv)
    measured = _column_series(meas_cols, column, meas_csv)
    value = nrmse(reference, measured)
    logger.info(f"[NRMSE] {column}: {value:.6f} over {len(reference)} samples")
    return NrmseReport(column=column, value=value, samples=len(reference))


def system_by_name(name: str, cutoff_hz: float = 50.0) -> TransferFunction:
    if name == "vd":
        return tf_shake_table_displacement()
    if name == "va":
        return tf_shake_table_acceleration()
    if name == "butterworth":
        return butterworth2_lowpass(cutoff_hz)
    raise UnknownSystem(f"unknown system {name!r}; expected vd, va or butterworth")


def bode(
    system_name: str,
    omega_min: float = 0.1,
    omega_max: float = 1000.0,
    points: int = 200,
    cutoff_hz: float = 50.0,
) -> Dict[str, np.ndarray]:
    """Magnitude and unwrapped phase on a logarithmic grid (omega = 0 is never sampled)."""
    tf = system_by_name(system_name, cutoff_hz)
    if not (0 < omega_min < omega_max) or not np.isfinite(omega_max):
        raise ConfigurationError(f"need 0 < omega_min < omega_max, got {omega_min}, {omega_max}")
    if points < 2:
        raise ConfigurationError(f"need at least 2 grid points, got {points}")
    at_origin = poly.origin_multiplicity(tf.den)
    if at_origin:
        logger.info(
            f"[BODE] {system_name} has {at_origin} pole(s) at s = 0; magnitude grows without bound as omega -> 0"
        )
    omega = np.geomspace(omega_min, omega_max, points)
    response = np.array([freq_response(tf, w) for w in omega])
    return {
        "omega_rad_s": omega,
        "mag": np.abs(response),
        "phase_rad": np.unwrap(np.angle(response)),
    }


def run_bode(
    system_name: str,
    omega_min: float = 0.1,
    omega_max: float = 1000.0,
    points: int = 200,
    output: Optional[PathLike] = None,
) -> Dict[str, np.ndarray]:
    """Bode export; written as CSV when `output` is given."""
    curve = bode(system_name, omega_min, omega_max, points)
    if output is not None:
        write_columns(curve, output)
        logger.info(f"[BODE] {system_name}: {points} points written to {output}")
    return curve
