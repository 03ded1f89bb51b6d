"""
Signal conditioning on TimeSeries: unit conversion, resampling,
differentiation, integration and the NRMSE tracking score.
"""

import math

import numpy as np
from scipy import signal as sps
from scipy.integrate import cumulative_trapezoid

from core.errors import InputDataError, LengthMismatch, UnitMismatch, ZeroReference
from core.schema.series import STANDARD_GRAVITY, TimeSeries, Unit


# ----------------------------
# Units
# ----------------------------
_TO_SI = {
    Unit.G: (Unit.M_S2, STANDARD_GRAVITY),
    Unit.G_S: (Unit.M_S3, STANDARD_GRAVITY),
}

_INTEGRAL_UNIT = {
    Unit.M_S3: Unit.M_S2,
    Unit.M_S2: Unit.M_S,
    Unit.M_S: Unit.M,
    Unit.V_S: Unit.V,
    Unit.N_S: Unit.N,
}


def to_si(ts: TimeSeries) -> TimeSeries:
    """Convert g-based units to m/s-based ones (g = 9.80665 m/s^2); SI input is returned as is."""
    if ts.unit not in _TO_SI:
        return ts
    unit, factor = _TO_SI[ts.unit]
    return ts.with_values(ts.values * factor, unit)


# ----------------------------
# Metric
# ----------------------------
def _check_aligned(reference: TimeSeries, measured: TimeSeries) -> None:
    if len(reference) != len(measured):
        raise LengthMismatch(f"lengths differ: {len(reference)} vs {len(measured)}")
    if len(reference) < 1:
        raise LengthMismatch("series are empty")
    if not math.isclose(reference.dt, measured.dt, rel_tol=1e-12, abs_tol=0.0):
        raise LengthMismatch(f"sample intervals differ: {reference.dt} vs {measured.dt}")
    if reference.unit != measured.unit:
        raise UnitMismatch(f"units differ: {reference.unit.value} vs {measured.unit.value}")


def nrmse(reference: TimeSeries, measured: TimeSeries) -> float:
    """
    Root-mean-square tracking error normalized by the reference peak:

        sqrt(sum((R_i - M_i)^2) / N) / max|R|

    The normalizer uses the reference only.
    """
    _check_aligned(reference, measured)
    peak = reference.peak()
    if peak == 0.0:
        raise ZeroReference("reference signal is identically zero")
    residual = reference.values - measured.values
    return float(math.sqrt(float(np.dot(residual, residual)) / len(reference)) / peak)


# ----------------------------
# Resampling and calculus
# ----------------------------
def resample(ts: TimeSeries, dt_new: float) -> TimeSeries:
    """
    Linear interpolation onto a uniform grid with step dt_new spanning the same duration.
    The first and last samples of the new grid hit the original endpoints exactly
    when the duration is a multiple of dt_new.
    """
    if not np.isfinite(dt_new) or dt_new <= 0:
        raise InputDataError(f"dt_new must be > 0, got {dt_new}")
    ts.require_length(1, "resample")
    if dt_new == ts.dt:
        return ts

    duration = ts.duration
    n_new = int(math.floor(duration / dt_new + 1e-9)) + 1
    t_old = np.arange(len(ts)) * ts.dt
    t_new = np.arange(n_new) * dt_new
    values = np.interp(t_new, t_old, ts.values)
    values[0] = ts.values[0]
    if math.isclose((n_new - 1) * dt_new, duration, rel_tol=1e-9, abs_tol=1e-12):
        values[-1] = ts.values[-1]
    return TimeSeries.create(values, dt_new, ts.unit, ts.t0)


def differentiate(ts: TimeSeries) -> TimeSeries:
    """Central differences in the interior, second-order one-sided at the ends."""
    ts.require_length(3, "differentiate")
    rate = np.gradient(ts.values, ts.dt, edge_order=2)
    return ts.with_values(rate, ts.unit.per_second())


def integrate(ts: TimeSeries) -> TimeSeries:
    """Cumulative trapezoidal integral starting from zero."""
    ts.require_length(1, "integrate")
    unit = _INTEGRAL_UNIT.get(ts.unit)
    if unit is None:
        raise UnitMismatch(f"no integral unit defined for {ts.unit.value}")
    return ts.with_values(cumulative_trapezoid(ts.values, dx=ts.dt, initial=0.0), unit)


def detrend(ts: TimeSeries) -> TimeSeries:
    """Remove the least-squares straight line."""
    if len(ts) < 2:
        return ts
    return ts.with_values(sps.detrend(ts.values, type="linear"))
