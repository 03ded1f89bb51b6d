"""
Second-order Butterworth low-pass design and bilinear discretization.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import signal as sps

from core.errors import ConfigurationError, NyquistViolation
from core.lti import polynomials as poly
from core.lti.systems import TransferFunction
from core.schema.series import TimeSeries


def butterworth2_lowpass(fc: float) -> TransferFunction:
    """wc^2 / (s^2 + sqrt(2) wc s + wc^2), wc = 2 pi fc."""
    if not np.isfinite(fc) or fc <= 0:
        raise ConfigurationError(f"cutoff frequency must be > 0 Hz, got {fc}")
    wc = 2.0 * math.pi * fc
    return TransferFunction.create([wc * wc], [1.0, math.sqrt(2.0) * wc, wc * wc])


@dataclass(frozen=True, eq=False)
class DiscreteFilter:
    """
    Causal IIR difference equation a[0] y[k] + a[1] y[k-1] + ... = b[0] u[k] + ...

    Filters are values; the streaming state `zi` is passed in and returned
    so a plant can carry it alongside its other states.
    """

    b: np.ndarray
    a: np.ndarray
    dt: float

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        b, a = b / a[0], a / a[0]
        width = max(b.size, a.size)
        b = np.pad(b, (0, width - b.size))
        a = np.pad(a, (0, width - a.size))
        b.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @property
    def order(self) -> int:
        return self.a.size - 1

    def initial_state(self) -> np.ndarray:
        return np.zeros(self.order)

    def apply(self, data: Union[TimeSeries, np.ndarray]) -> Union[TimeSeries, np.ndarray]:
        """Filter a whole signal from zero initial state."""
        if isinstance(data, TimeSeries):
            if not math.isclose(data.dt, self.dt, rel_tol=1e-9):
                raise ConfigurationError(
                    f"filter designed for dt={self.dt} applied to series with dt={data.dt}"
                )
            return data.with_values(sps.lfilter(self.b, self.a, data.values))
        return sps.lfilter(self.b, self.a, np.asarray(data, dtype=float))

    def step(self, u: float, zi: np.ndarray) -> Tuple[float, np.ndarray]:
        """Advance one sample; returns (output, new state)."""
        y, zf = sps.lfilter(self.b, self.a, (u,), zi=zi)
        return float(y[0]), zf

    def poles(self) -> np.ndarray:
        return poly.roots(self.a)

    def freq_response(self, omega: float) -> complex:
        z = np.exp(1j * omega * self.dt)
        return complex(np.polyval(self.b, z) / np.polyval(self.a, z))


def discretize_bilinear(
    tf: TransferFunction, dt: float, prewarp_hz: Optional[float] = None
) -> DiscreteFilter:
    """
    Tustin transform of `tf` at step dt. With prewarp_hz the discrete response
    matches the continuous one exactly at that frequency.
    """
    if not np.isfinite(dt) or dt <= 0:
        raise ConfigurationError(f"sample interval must be > 0, got {dt}")
    fs = 1.0 / dt
    if prewarp_hz is not None:
        if prewarp_hz >= 0.5 * fs:
            raise NyquistViolation(
                f"cutoff {prewarp_hz} Hz is not below the Nyquist frequency {0.5 * fs} Hz (dt={dt})"
            )
        w = 2.0 * math.pi * prewarp_hz
        fs = w / (2.0 * math.tan(w * dt / 2.0))
    b, a = sps.bilinear(tf.num, tf.den, fs=fs)
    return DiscreteFilter(b=b, a=a, dt=dt)


def butterworth2_discrete(fc: float, dt: float) -> DiscreteFilter:
    """The prewarped discrete Butterworth used for signal conditioning and the inner loop."""
    return discretize_bilinear(butterworth2_lowpass(fc), dt, prewarp_hz=fc)
