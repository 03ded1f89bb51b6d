"""
Fixed-step classical Runge-Kutta integration.
"""

from typing import Callable, Union

import numpy as np

from core.errors import ConfigurationError
from core.lti.systems import StateSpace

Input = Union[float, Callable[[float], float]]


def rk4_step(
    f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, dt: float
) -> np.ndarray:
    """One classical RK4 step of y' = f(t, y)."""
    half = 0.5 * dt
    k1 = f(t, y)
    k2 = f(t + half, y + half * k1)
    k3 = f(t + half, y + half * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(ss: StateSpace, x: np.ndarray, u: Input, dt: float, t: float = 0.0) -> np.ndarray:
    """
    Advance x' = A x + B u(t) by dt. `u` is either a constant held over the
    step or a function of time sampled at t, t + dt/2 and t + dt.
    """
    if not dt > 0:
        raise ConfigurationError(f"step must be > 0, got {dt}")
    x = np.asarray(x, dtype=float)
    if callable(u):
        return rk4_step(lambda tau, xs: ss.A @ xs + ss.B * u(tau), t, x, dt)
    u = float(u)
    return rk4_step(lambda tau, xs: ss.A @ xs + ss.B * u, t, x, dt)


def linear_input(u0: float, u1: float, t0: float, dt: float) -> Callable[[float], float]:
    """Input interpolated linearly between its samples at t0 and t0 + dt."""
    slope = (u1 - u0) / dt

    def u(tau: float) -> float:
        return u0 + slope * (tau - t0)

    return u
