"""Linear time-invariant toolbox: realization, frequency response, filters, solvers, RK4."""

from core.lti.filters import DiscreteFilter, butterworth2_discrete, butterworth2_lowpass, discretize_bilinear
from core.lti.integrate import rk4_step, step_rk4
from core.lti.solvers import place_poles, solve_lyapunov
from core.lti.systems import (
    StateSpace,
    TransferFunction,
    freq_response,
    poles,
    tf_shake_table_acceleration,
    tf_shake_table_displacement,
    to_state_space,
)

__all__ = [
    "TransferFunction",
    "StateSpace",
    "DiscreteFilter",
    "tf_shake_table_displacement",
    "tf_shake_table_acceleration",
    "to_state_space",
    "freq_response",
    "poles",
    "butterworth2_lowpass",
    "butterworth2_discrete",
    "discretize_bilinear",
    "solve_lyapunov",
    "place_poles",
    "step_rk4",
    "rk4_step",
]
