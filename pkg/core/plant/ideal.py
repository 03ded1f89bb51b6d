"""
Force-driven rigid table: d_t'' = (F - specimen reaction) / m_t.
"""

from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple, Union

import numpy as np

from core.errors import InvalidMass
from core.lti.integrate import rk4_step
from core.structure.frame import (
    StructureState,
    TwoDofFrame,
    newmark_affine,
    newmark_finish,
)

ForceLaw = Callable[[float, np.ndarray], float]
CompanionRate = Callable[[float, np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class IdealTable:
    """Table mass (kg), displacement (m), velocity (m/s) and last acceleration (m/s^2)."""

    m_t: float
    d_t: float = 0.0
    v_t: float = 0.0
    a_t: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.m_t) or self.m_t <= 0:
            raise InvalidMass(f"table mass must be > 0, got {self.m_t}")

    @property
    def state(self) -> np.ndarray:
        return np.array([self.d_t, self.v_t])

    def is_finite(self) -> bool:
        return bool(np.isfinite([self.d_t, self.v_t, self.a_t]).all())


def ideal_step(
    table: IdealTable,
    force: Union[float, ForceLaw],
    specimen_feedback: float,
    dt: float,
    *,
    t: float = 0.0,
    companion: Optional[np.ndarray] = None,
    companion_rate: Optional[CompanionRate] = None,
) -> Union[IdealTable, Tuple[IdealTable, np.ndarray]]:
    """
    One RK4 step of the table under a force and a held specimen reaction.

    `force` is a constant or a law F(t, y) evaluated at every stage, where
    y = [d_t, v_t, *companion]. A companion state (for example a controller
    state driven by the table) is integrated in the same step through
    companion_rate(t, y, a_t); the updated companion is then returned too.
    """
    m_t = table.m_t
    law = force if callable(force) else (lambda tau, y, F=float(force): F)
    extra = np.zeros(0) if companion is None else np.asarray(companion, dtype=float).reshape(-1)

    def rate(tau: float, y: np.ndarray) -> np.ndarray:
        accel = (law(tau, y) - specimen_feedback) / m_t
        if companion_rate is None:
            return np.array([y[1], accel])
        return np.concatenate(([y[1], accel], companion_rate(tau, y, accel)))

    y0 = np.concatenate(([table.d_t, table.v_t], extra))
    y1 = rk4_step(rate, t, y0, dt)
    a_end = (law(t + dt, y1) - specimen_feedback) / m_t
    stepped = replace(table, d_t=float(y1[0]), v_t=float(y1[1]), a_t=float(a_end))
    if companion is None:
        return stepped
    return stepped, y1[2:]


def balance_acceleration(
    force: float,
    m_t: float,
    frame: Optional[TwoDofFrame],
    structure: Optional[StructureState],
    dt: float,
) -> Tuple[float, Optional[StructureState]]:
    """
    Table acceleration and specimen step that together satisfy

        F = m_t a_t + m1 a1_abs + m2 a2_abs

    at the end of the step. The Newmark step is affine in the base acceleration,
    so this is one scalar linear solve.
    """
    if frame is None:
        return force / m_t, structure
    acc0, influence = newmark_affine(frame, structure, dt)
    m = np.array([frame.m1, frame.m2])
    a_t = (force - float(m @ acc0)) / (m_t + float(m @ (1.0 + influence)))
    return a_t, newmark_finish(structure, acc0 + a_t * influence, a_t, dt)
