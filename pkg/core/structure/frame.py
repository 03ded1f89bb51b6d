"""
Two-story shear-frame specimen under base excitation.

Relative coordinates x = [x1, x2] (floor displacement minus table displacement):

    M x'' + C x' + K x = -M iota a_g,   iota = [1, 1]

with M = diag(m1, m2) and K, C assembled from the story springs and dashpots.
"""

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.linalg import eigh

from core.errors import ConfigurationError, InvalidFrame
from core.lti.systems import StateSpace

IOTA = np.ones(2)


@dataclass(frozen=True)
class TwoDofFrame:
    """Floor masses (kg), story stiffnesses (N/m) and story dashpots (N s/m)."""

    m1: float
    m2: float
    k1: float
    k2: float
    c1: float = 0.0
    c2: float = 0.0

    def __post_init__(self):
        for name in ("m1", "m2", "k1", "k2", "c1", "c2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidFrame(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.m1 <= 0 or self.m2 <= 0:
            raise InvalidFrame(f"floor masses must be > 0, got m1={self.m1}, m2={self.m2}")
        if self.k1 <= 0 or self.k2 <= 0:
            raise InvalidFrame(f"story stiffnesses must be > 0, got k1={self.k1}, k2={self.k2}")
        if self.c1 < 0 or self.c2 < 0:
            raise InvalidFrame(f"story dashpots must be >= 0, got c1={self.c1}, c2={self.c2}")

    @staticmethod
    def from_damping_ratios(
        m1: float, m2: float, k1: float, k2: float, zeta1: float, zeta2: float
    ) -> "TwoDofFrame":
        """
        Frame whose story dashpots give modal damping ratios zeta1, zeta2.

        Each ratio is zeta_i = phi_i^T C phi_i / (2 w_i phi_i^T M phi_i); C is linear
        in (c1, c2), so the two ratios pin the dashpots through a 2x2 solve.
        """
        if zeta1 < 0 or zeta2 < 0:
            raise InvalidFrame(f"damping ratios must be >= 0, got {zeta1}, {zeta2}")
        bare = TwoDofFrame(m1, m2, k1, k2)
        omegas, shapes = bare.modes()
        c_unit = (np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[1.0, -1.0], [-1.0, 1.0]]))
        M = bare.mass_matrix()

        lhs = np.empty((2, 2))
        for i in range(2):
            phi = shapes[:, i]
            denom = 2.0 * omegas[i] * (phi @ M @ phi)
            lhs[i] = [phi @ c_unit[0] @ phi / denom, phi @ c_unit[1] @ phi / denom]
        c1, c2 = np.linalg.solve(lhs, [zeta1, zeta2])
        # Roundoff around a zero dashpot
        floor = -1e-9 * max(abs(c1), abs(c2), 1e-300)
        if c1 < floor or c2 < floor:
            raise InvalidFrame(
                f"damping ratios ({zeta1}, {zeta2}) need a negative story dashpot (c1={c1:.4g}, c2={c2:.4g})"
            )
        return replace(bare, c1=max(float(c1), 0.0), c2=max(float(c2), 0.0))

    # ----------------------------
    # Matrices
    # ----------------------------
    def mass_matrix(self) -> np.ndarray:
        return np.diag([self.m1, self.m2])

    def stiffness_matrix(self) -> np.ndarray:
        return np.array([[self.k1 + self.k2, -self.k2], [-self.k2, self.k2]])

    def damping_matrix(self) -> np.ndarray:
        return np.array([[self.c1 + self.c2, -self.c2], [-self.c2, self.c2]])

    @property
    def total_mass(self) -> float:
        return self.m1 + self.m2

    def modes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Natural frequencies (rad/s, ascending) and mass-normalized mode shapes (columns)."""
        lam, shapes = eigh(self.stiffness_matrix(), self.mass_matrix())
        return np.sqrt(lam), shapes

    def modal_damping_ratios(self) -> np.ndarray:
        omegas, shapes = self.modes()
        C = self.damping_matrix()
        return np.array([shapes[:, i] @ C @ shapes[:, i] / (2.0 * omegas[i]) for i in range(2)])


@dataclass(frozen=True)
class StructureState:
    """
    Relative floor displacements and velocities, absolute floor accelerations,
    and the base acceleration of the same instant.
    """

    x1: float = 0.0
    x2: float = 0.0
    v1: float = 0.0
    v2: float = 0.0
    a1_abs: float = 0.0
    a2_abs: float = 0.0
    ag: float = 0.0

    @staticmethod
    def at_rest() -> "StructureState":
        return StructureState()

    @staticmethod
    def initial(
        frame: TwoDofFrame, x=(0.0, 0.0), v=(0.0, 0.0), base_accel: float = 0.0
    ) -> "StructureState":
        """State with accelerations consistent with the equation of motion."""
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        rhs = -frame.mass_matrix() @ IOTA * base_accel - frame.damping_matrix() @ v - frame.stiffness_matrix() @ x
        rel = np.linalg.solve(frame.mass_matrix(), rhs)
        return _pack(x, v, rel, base_accel)

    @property
    def displacement(self) -> np.ndarray:
        return np.array([self.x1, self.x2])

    @property
    def velocity(self) -> np.ndarray:
        return np.array([self.v1, self.v2])

    @property
    def relative_acceleration(self) -> np.ndarray:
        return np.array([self.a1_abs - self.ag, self.a2_abs - self.ag])

    def is_finite(self) -> bool:
        return all(
            math.isfinite(v) for v in (self.x1, self.x2, self.v1, self.v2, self.a1_abs, self.a2_abs, self.ag)
        )

    def energy(self, frame: TwoDofFrame) -> float:
        """Kinetic plus strain energy in relative coordinates."""
        x, v = self.displacement, self.velocity
        return 0.5 * float(v @ frame.mass_matrix() @ v + x @ frame.stiffness_matrix() @ x)


def _pack(x: np.ndarray, v: np.ndarray, rel: np.ndarray, base_accel: float) -> StructureState:
    return StructureState(
        x1=float(x[0]),
        x2=float(x[1]),
        v1=float(v[0]),
        v2=float(v[1]),
        a1_abs=float(rel[0] + base_accel),
        a2_abs=float(rel[1] + base_accel),
        ag=float(base_accel),
    )


# ----------------------------
# Average-acceleration Newmark (gamma = 1/2, beta = 1/4)
# ----------------------------
@lru_cache(maxsize=64)
def _newmark_operators(frame: TwoDofFrame, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    M = frame.mass_matrix()
    K_eff = M + 0.5 * dt * frame.damping_matrix() + 0.25 * dt * dt * frame.stiffness_matrix()
    K_eff_inv = np.linalg.inv(K_eff)
    influence = -K_eff_inv @ (M @ IOTA)
    return K_eff_inv, influence


def newmark_affine(frame: TwoDofFrame, state: StructureState, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Relative acceleration at the end of the step as acc0 + base_accel * influence.
    The step is affine in the new base acceleration.
    """
    if not dt > 0:
        raise ConfigurationError(f"step must be > 0, got {dt}")
    K_eff_inv, influence = _newmark_operators(frame, float(dt))
    x, v, a = state.displacement, state.velocity, state.relative_acceleration
    rhs = -frame.damping_matrix() @ (v + 0.5 * dt * a) - frame.stiffness_matrix() @ (
        x + dt * v + 0.25 * dt * dt * a
    )
    return K_eff_inv @ rhs, influence


def newmark_finish(
    state: StructureState, rel_accel: np.ndarray, base_accel: float, dt: float
) -> StructureState:
    """Velocity and displacement updates once the new relative acceleration is known."""
    x, v, a = state.displacement, state.velocity, state.relative_acceleration
    v_new = v + 0.5 * dt * (a + rel_accel)
    x_new = x + dt * v + 0.25 * dt * dt * (a + rel_accel)
    return _pack(x_new, v_new, rel_accel, base_accel)


def newmark_step(
    frame: TwoDofFrame, state: StructureState, base_accel: float, dt: float
) -> StructureState:
    """Advance the frame one step under the base acceleration at the end of the step."""
    acc0, influence = newmark_affine(frame, state, dt)
    return newmark_finish(state, acc0 + base_accel * influence, base_accel, dt)


# ----------------------------
# Modal data and coupling
# ----------------------------
def modal_frequencies(frame: TwoDofFrame) -> Tuple[float, float]:
    """
    Roots of det(K - w^2 M) = 0 from the quadratic

        m1 m2 L^2 - (m1 k2 + m2 (k1 + k2)) L + k1 k2 = 0,   L = w^2
    """
    a = frame.m1 * frame.m2
    b = frame.m1 * frame.k2 + frame.m2 * (frame.k1 + frame.k2)
    c = frame.k1 * frame.k2
    disc = max(b * b - 4.0 * a * c, 0.0)
    q = 0.5 * (b + math.sqrt(disc))
    return math.sqrt(c / q), math.sqrt(q / a)


def inertial_feedback(state: StructureState, frame: TwoDofFrame) -> float:
    """Specimen reaction on the table: m1 a1_abs + m2 a2_abs."""
    return frame.m1 * state.a1_abs + frame.m2 * state.a2_abs


def frame_state_space(frame: TwoDofFrame) -> StateSpace:
    """
    First-order form y = [x1, x2, v1, v2] driven by the base acceleration,
    output x1.
    """
    M_inv = np.linalg.inv(frame.mass_matrix())
    A = np.zeros((4, 4))
    A[:2, 2:] = np.eye(2)
    A[2:, :2] = -M_inv @ frame.stiffness_matrix()
    A[2:, 2:] = -M_inv @ frame.damping_matrix()
    B = np.concatenate([np.zeros(2), -IOTA])
    C = np.array([1.0, 0.0, 0.0, 0.0])
    return StateSpace(A=A, B=B, C=C)
