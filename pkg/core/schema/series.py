from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence, Union

import numpy as np

from core.errors import InputDataError, TooShort


STANDARD_GRAVITY = 9.80665  # m/s^2


class Unit(str, Enum):
    """Physical unit tag carried by a TimeSeries."""

    M = "m"
    M_S = "m/s"
    M_S2 = "m/s^2"
    M_S3 = "m/s^3"
    G = "g"
    G_S = "g/s"
    V = "V"
    V_S = "V/s"
    N = "N"
    N_S = "N/s"
    NONE = "1"
    PER_S = "1/s"

    def per_second(self) -> "Unit":
        """Unit of the time derivative."""
        try:
            return _PER_SECOND[self]
        except KeyError:
            raise InputDataError(f"no derivative unit defined for {self.value}") from None


_PER_SECOND = {
    Unit.M: Unit.M_S,
    Unit.M_S: Unit.M_S2,
    Unit.M_S2: Unit.M_S3,
    Unit.G: Unit.G_S,
    Unit.V: Unit.V_S,
    Unit.N: Unit.N_S,
    Unit.NONE: Unit.PER_S,
}


def _frozen_array(values: Union[Sequence[float], np.ndarray]) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """
    Uniformly sampled real signal.

    `values` is stored as a read-only float64 array so a series can be shared
    freely between the simulation and reporting threads.
    """

    dt: float
    values: np.ndarray
    unit: Unit = Unit.NONE
    t0: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise InputDataError(f"sample interval must be > 0, got {self.dt}")
        object.__setattr__(self, "values", _frozen_array(self.values))
        object.__setattr__(self, "unit", Unit(self.unit))

    # ----------------------------
    # construction
    # ----------------------------
    @staticmethod
    def create(values, dt: float, unit: Union[Unit, str] = Unit.NONE, t0: float = 0.0) -> "TimeSeries":
        return TimeSeries(dt=float(dt), values=values, unit=Unit(unit), t0=float(t0))

    @staticmethod
    def sampled(fn, dt: float, n: int, unit: Union[Unit, str] = Unit.NONE) -> "TimeSeries":
        """Sample a vectorized function on t = 0, dt, ..., (n-1)*dt."""
        t = np.arange(n) * dt
        return TimeSeries.create(fn(t), dt, unit)

    # ----------------------------
    # views
    # ----------------------------
    def __len__(self) -> int:
        return int(self.values.shape[0])

    @property
    def duration(self) -> float:
        return (len(self) - 1) * self.dt

    @property
    def time(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) * self.dt

    def slice(self, start: int, stop: int = None) -> "TimeSeries":
        """Sub-series by sample index; unit and dt are kept."""
        sub = self.values[start:stop]
        return replace(self, values=sub, t0=self.t0 + start * self.dt)

    def with_values(self, values, unit: Union[Unit, str, None] = None) -> "TimeSeries":
        return replace(self, values=values, unit=self.unit if unit is None else Unit(unit))

    def peak(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self) else 0.0

    def require_length(self, n: int, op: str) -> None:
        if len(self) < n:
            raise TooShort(f"{op} needs at least {n} samples, got {len(self)}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.dt == other.dt
            and self.unit == other.unit
            and self.t0 == other.t0
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


@dataclass(frozen=True)
class GroundMotion:
    """
    Ground-motion acceleration record.
    `source_dt` is the interval declared in the file header.
    """

    record_id: str
    accel: TimeSeries
    source_dt: float = field(default=0.0)

    def __post_init__(self):
        if self.source_dt == 0.0:
            object.__setattr__(self, "source_dt", self.accel.dt)
        if self.accel.unit not in (Unit.G, Unit.M_S2):
            raise InputDataError(
                f"ground motion must be in g or m/s^2, got {self.accel.unit.value}"
            )

    @property
    def npts(self) -> int:
        return len(self.accel)
