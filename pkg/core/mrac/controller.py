"""
Model-reference adaptive controller for a single-axis table.

Augmented state X = [d_t, v_t, x_c]: table displacement and velocity plus the
command state x_c' = E_p [d_t, v_t] + E_r x_c - c, with c = E_r r - r'.
The reference model is X_r' = A_r X_r + B_r c, A_r = A - B K. The control law
F = -W_hat . Phi with Phi = [sigma_p, -K X] reproduces the reference model when
W_hat equals W = [-m1, -m2, -m_t].
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from core.errors import ConfigurationError, InvalidMass, NotHurwitz
from core.logger import get_logger
from core.lti.integrate import linear_input, rk4_step
from core.lti.solvers import is_hurwitz, lyapunov_residual, place_poles, solve_lyapunov
from core.lti.systems import StateSpace

logger = get_logger(__name__)

A_P = np.array([[0.0, 1.0], [0.0, 0.0]])
B_P = np.array([0.0, 1.0])

Regressor = np.ndarray
TrackingError = np.ndarray


@dataclass(frozen=True, eq=False)
class AugmentedSystem:
    """Block matrices of the augmented plant, built around the nominal table mass."""

    A: np.ndarray
    B: np.ndarray
    B_r: np.ndarray
    Lambda: float
    Wp: np.ndarray
    Ep: np.ndarray
    Er: float

    @property
    def m_t_nominal(self) -> float:
        return 1.0 / self.Lambda

    def rate(self, X: np.ndarray, a_table: float, c: float) -> np.ndarray:
        """X' for a given table acceleration and command value."""
        return self.A @ X + self.B * a_table + self.B_r * c


@dataclass(frozen=True, eq=False)
class GainAndCertificate:
    """Feedback gain, closed-loop reference matrix and its Lyapunov certificate."""

    K: np.ndarray
    A_r: np.ndarray
    P: np.ndarray
    PB: np.ndarray = field(default=None)

    @property
    def K_r(self) -> float:
        return float(self.K[2])


@dataclass(frozen=True, eq=False)
class AdaptiveState:
    """Weight estimate W_hat and adaptation rate gamma."""

    W_hat: np.ndarray
    gamma: float

    @staticmethod
    def create(gamma: float, initial: Optional[Sequence[float]] = None) -> "AdaptiveState":
        if not gamma > 0:
            raise ConfigurationError(f"adaptation rate must be > 0, got {gamma}")
        W = np.zeros(3) if initial is None else np.asarray(initial, dtype=float).reshape(3)
        return AdaptiveState(W_hat=W, gamma=float(gamma))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.W_hat)))


# ----------------------------
# Design
# ----------------------------
def build_augmented(
    m_t_nominal: float,
    e_p: Sequence[float] = (0.0, 0.0),
    e_r: float = 1.0,
    m1: float = 0.0,
    m2: float = 0.0,
) -> AugmentedSystem:
    """
    A = [[A_p, 0], [E_p, E_r]],  B = [B_p; 0],  B_r = [0, 0, -1].

    With the default E_p = 0 the command state is decoupled from the table and
    (A, B) is not controllable; pass a nonzero E_p to design against it.
    """
    if not np.isfinite(m_t_nominal) or m_t_nominal <= 0:
        raise InvalidMass(f"table mass must be > 0, got {m_t_nominal}")
    if m1 < 0 or m2 < 0:
        raise InvalidMass(f"floor masses must be >= 0, got m1={m1}, m2={m2}")
    Ep = np.asarray(e_p, dtype=float).reshape(2)
    A = np.zeros((3, 3))
    A[:2, :2] = A_P
    A[2, :2] = Ep
    A[2, 2] = e_r
    B = np.concatenate([B_P, [0.0]])
    B_r = np.array([0.0, 0.0, -1.0])
    Lambda = 1.0 / m_t_nominal
    for arr in (A, B, B_r, Ep):
        arr.setflags(write=False)
    return AugmentedSystem(
        A=A,
        B=B,
        B_r=B_r,
        Lambda=Lambda,
        Wp=np.array([-m1 * Lambda, -m2 * Lambda]),
        Ep=Ep,
        Er=float(e_r),
    )


def design_reference(aug: AugmentedSystem, desired_poles: Sequence[complex]) -> GainAndCertificate:
    """Place the reference poles on (A, B) and certify A_r with a Lyapunov matrix."""
    desired = np.asarray(desired_poles, dtype=complex)
    if np.any(desired.real >= 0):
        raise NotHurwitz(f"desired poles must lie in the open left half-plane: {desired}")
    K = place_poles(aug.A, aug.B, desired)
    A_r = aug.A - np.outer(aug.B, K)
    if not is_hurwitz(A_r):
        raise NotHurwitz(f"placed closed loop is not Hurwitz: {np.linalg.eigvals(A_r)}")
    P = solve_lyapunov(A_r)
    for arr in (K, A_r, P):
        arr.setflags(write=False)
    logger.info(
        f"[MRAC] Reference model designed: K={np.array2string(K, precision=6)} "
        f"residual={lyapunov_residual(A_r, P):.2e}"
    )
    return GainAndCertificate(K=K, A_r=A_r, P=P, PB=P @ aug.B)


def reference_model(gc: GainAndCertificate, B_r: np.ndarray) -> StateSpace:
    """Reference model as a system from c to the reference displacement."""
    return StateSpace(A=gc.A_r, B=B_r, C=np.array([1.0, 0.0, 0.0]))


def reference_dc_gain(aug: AugmentedSystem, gc: GainAndCertificate) -> float:
    """
    Steady-state d_r / r for a constant reference, where c = E_r r.

    Equals K_r E_r / (K_r E_p[0] - K[0] E_r). For fixed poles the placed K_r
    scales as 1 / E_p[0], and so does the gain.
    """
    steady = -np.linalg.solve(gc.A_r, aug.B_r)
    return float(aug.Er * steady[0])


def true_weights(m1: float, m2: float, m_t: float) -> np.ndarray:
    """The weight vector that reduces the closed loop to the reference model."""
    return np.array([-m1, -m2, -m_t], dtype=float)


# ----------------------------
# Runtime
# ----------------------------
def command_signal(r: float, r_dot: float, e_r: float = 1.0) -> float:
    return e_r * r - r_dot


def reference_step(
    gc: GainAndCertificate,
    B_r: np.ndarray,
    X_r: np.ndarray,
    c: float,
    dt: float,
    c_next: Optional[float] = None,
    t: float = 0.0,
) -> np.ndarray:
    """
    RK4 step of X_r' = A_r X_r + B_r c. With c_next the command is interpolated
    linearly across the step, otherwise it is held.
    """
    A_r = gc.A_r
    if c_next is None:
        return rk4_step(lambda tau, x: A_r @ x + B_r * c, t, X_r, dt)
    u = linear_input(c, c_next, t, dt)
    return rk4_step(lambda tau, x: A_r @ x + B_r * u(tau), t, X_r, dt)


def build_regressor(sigma_p: Sequence[float], K: np.ndarray, X: np.ndarray) -> Regressor:
    """Phi = [sigma_p1, sigma_p2, -K X]."""
    return np.array([sigma_p[0], sigma_p[1], -float(K @ X)])


def control_force(adaptive: AdaptiveState, phi: Regressor) -> float:
    """F = -W_hat . Phi"""
    return -float(adaptive.W_hat @ phi)


def update_weights(
    adaptive: AdaptiveState,
    phi: Regressor,
    e: TrackingError,
    P: np.ndarray,
    B: np.ndarray,
    dt: float,
) -> AdaptiveState:
    """Explicit Euler on W_hat' = gamma Phi (e^T P B)."""
    gain = float(e @ (P @ B))
    return AdaptiveState(W_hat=adaptive.W_hat + (dt * adaptive.gamma * gain) * phi, gamma=adaptive.gamma)


def lyapunov_value(
    e: TrackingError,
    P: np.ndarray,
    W_hat: np.ndarray,
    W_true: np.ndarray,
    Lambda: float,
    gamma: float,
) -> float:
    """V = e^T P e + Lambda / gamma * |W_hat - W|^2"""
    W_err = np.asarray(W_hat, dtype=float) - np.asarray(W_true, dtype=float)
    return float(e @ P @ e) + Lambda / gamma * float(W_err @ W_err)
