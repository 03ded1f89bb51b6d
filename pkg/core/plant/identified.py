"""
Identified servo-hydraulic table behind an inner displacement loop.

The valve-voltage-to-displacement model is realized once; displacement,
velocity and acceleration are all read from that one state vector.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Tuple

import numpy as np

from core.errors import StepTooLarge
from core.logger import get_logger
from core.lti import polynomials as poly
from core.lti.filters import DiscreteFilter, butterworth2_discrete, butterworth2_lowpass
from core.lti.integrate import step_rk4
from core.lti.systems import StateSpace, TransferFunction, tf_shake_table_displacement, to_state_space

logger = get_logger(__name__)

MAX_STEP = 1e-4
DEFAULT_INNER_GAIN = 200.0
DEFAULT_OUTPUT_SCALE = 1e-3  # identified output is in mm
DEFAULT_LEAK = 0.05


def table_model(output_scale: float = DEFAULT_OUTPUT_SCALE) -> TransferFunction:
    """Voltage to displacement in metres."""
    return tf_shake_table_displacement().scaled(output_scale)


@dataclass(frozen=True, eq=False)
class IdentifiedTable:
    """
    Realized table model, its state, the inner-loop filter and its state,
    and the table response read from the realization.
    """

    ss_d: StateSpace
    x: np.ndarray
    lowpass: DiscreteFilter
    zi: np.ndarray
    inner_gain: float
    d_t: float = 0.0
    v_t: float = 0.0
    a_t: float = 0.0
    voltage: float = 0.0

    @staticmethod
    def create(
        dt: float,
        inner_gain: float = DEFAULT_INNER_GAIN,
        cutoff_hz: float = 50.0,
        output_scale: float = DEFAULT_OUTPUT_SCALE,
    ) -> "IdentifiedTable":
        _check_step(dt)
        ss = to_state_space(table_model(output_scale))
        lowpass = butterworth2_discrete(cutoff_hz, dt)
        logger.debug(f"[PLANT] identified table realized: n={ss.n} dt={dt} k_v={inner_gain}")
        return IdentifiedTable(
            ss_d=ss,
            x=np.zeros(ss.n),
            lowpass=lowpass,
            zi=lowpass.initial_state(),
            inner_gain=float(inner_gain),
        )

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.x)) and np.isfinite([self.d_t, self.v_t, self.a_t]).all())


def _check_step(dt: float) -> None:
    if dt > MAX_STEP * (1.0 + 1e-9):
        raise StepTooLarge(f"identified table needs dt <= {MAX_STEP} s, got {dt}")


@lru_cache(maxsize=8)
def _output_rows(ss: StateSpace) -> Tuple[np.ndarray, np.ndarray, float, float]:
    CA = ss.C @ ss.A
    CA2 = CA @ ss.A
    return CA, CA2, float(ss.C @ ss.B), float(CA @ ss.B)


def identified_step(
    table: IdentifiedTable, d_cmd: float, dt: float, disturbance: float = 0.0
) -> IdentifiedTable:
    """
    Inner loop v = LP(k_v (d_cmd - d_t)) held over one RK4 step of the table model.
    `disturbance` is added to the valve voltage.
    """
    _check_step(dt)
    v, zi = table.lowpass.step(table.inner_gain * (d_cmd - table.d_t), table.zi)
    u = v + disturbance
    ss = table.ss_d
    x = step_rk4(ss, table.x, u, dt)
    CA, CA2, CB, CAB = _output_rows(ss)
    return replace(
        table,
        x=x,
        zi=zi,
        d_t=float(ss.C @ x + ss.D * u),
        v_t=float(CA @ x + CB * u),
        a_t=float(CA2 @ x + CAB * u),
        voltage=u,
    )


# ----------------------------
# Force to displacement command
# ----------------------------
@lru_cache(maxsize=16)
def command_shaper(m_t_nominal: float, leak: float = DEFAULT_LEAK) -> StateSpace:
    """q1' = -leak q1 + F / m, q2' = -leak q2 + q1, d_cmd = q2."""
    return StateSpace(
        A=np.array([[-leak, 0.0], [1.0, -leak]]),
        B=np.array([1.0 / m_t_nominal, 0.0]),
        C=np.array([0.0, 1.0]),
    )


def force_to_command(
    F: float, m_t_nominal: float, state: np.ndarray, dt: float, leak: float = DEFAULT_LEAK
) -> Tuple[float, np.ndarray]:
    """Leaky double integration of F / m_t_nominal; returns (d_cmd, new state)."""
    ss = command_shaper(float(m_t_nominal), float(leak))
    new_state = step_rk4(ss, state, F, dt)
    return float(new_state[1]), new_state


# ----------------------------
# Inner-loop analysis
# ----------------------------
def inner_loop_polynomial(
    inner_gain: float = DEFAULT_INNER_GAIN,
    cutoff_hz: float = 50.0,
    output_scale: float = DEFAULT_OUTPUT_SCALE,
) -> np.ndarray:
    """
    Characteristic polynomial of the closed inner loop, 1 + k_v LP(s) G(s) = 0,
    with the s factor shared by the table numerator and denominator cancelled.
    """
    plant = table_model(output_scale).cancel_origin()
    lp = butterworth2_lowpass(cutoff_hz)
    return np.polyadd(
        np.polymul(plant.den, lp.den), inner_gain * np.polymul(plant.num, lp.num)
    )


def inner_loop_poles(
    inner_gain: float = DEFAULT_INNER_GAIN,
    cutoff_hz: float = 50.0,
    output_scale: float = DEFAULT_OUTPUT_SCALE,
) -> np.ndarray:
    return poly.roots(inner_loop_polynomial(inner_gain, cutoff_hz, output_scale))
