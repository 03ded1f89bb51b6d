"""
Reference displacement trajectory r(t) and its rate for a scenario.

A ground-motion record is converted to m/s^2, resampled to the simulation
step, low-passed with the conditioning Butterworth filter, integrated twice
and detrended.
"""

from typing import Tuple

import numpy as np

from core.logger import get_logger
from core.lti.filters import butterworth2_discrete
from core.schema.series import GroundMotion, TimeSeries, Unit
from core.schemas import ScenarioConfig
from core.signals.at2 import load_at2
from core.signals.processing import detrend, differentiate, integrate, resample, to_si

logger = get_logger(__name__)


def displacement_from_motion(motion: GroundMotion, dt: float, cutoff_hz: float) -> TimeSeries:
    """Filtered, drift-corrected displacement history of a ground motion at step dt."""
    accel = resample(to_si(motion.accel), dt)
    accel = butterworth2_discrete(cutoff_hz, dt).apply(accel)
    velocity = integrate(accel)
    return detrend(integrate(velocity))


def _fit_length(values: np.ndarray, n: int) -> np.ndarray:
    if values.size >= n:
        return values[:n]
    # Hold the last position once the record ends
    return np.pad(values, (0, n - values.size), mode="edge")


def build_reference(config: ScenarioConfig) -> Tuple[TimeSeries, TimeSeries]:
    """Reference displacement r and rate r_dot sampled at config.dt over config.duration."""
    dt = config.dt
    n = config.n_steps + 1
    t = np.arange(n) * dt

    if config.reference == "record":
        motion = load_at2(config.record_path)
        disp = displacement_from_motion(motion, dt, config.filter_cutoff_hz)
        values = _fit_length(np.asarray(disp.values), n)
        logger.info(
            f"[REF] {motion.record_id}: peak displacement {np.max(np.abs(values)):.4g} m "
            f"before scaling by {config.amplitude_scale:g}"
        )
    elif config.reference == "sine":
        values = config.sine_amplitude_m * np.sin(2.0 * np.pi * config.sine_frequency_hz * t)
    else:
        values = np.full(n, config.step_amplitude_m)

    r = TimeSeries.create(values * config.amplitude_scale, dt, Unit.M)
    if config.reference == "step":
        r_dot = TimeSeries.create(np.zeros(n), dt, Unit.M_S)
    else:
        r_dot = differentiate(r)
    return r, r_dot
