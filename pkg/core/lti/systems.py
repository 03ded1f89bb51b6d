"""
Single-input single-output LTI descriptions: rational transfer functions,
their controllable canonical realization, and frequency response.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.linalg import matrix_balance

from core.errors import ConfigurationError, ImproperSystem, SingularAtFrequency
from core.lti import polynomials as poly


@dataclass(frozen=True, eq=False)
class TransferFunction:
    """num(s)/den(s), coefficients in descending powers of s."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        num = poly.as_poly(self.num)
        den = poly.as_poly(self.den)
        if den.size == 1 and den[0] == 0.0:
            raise ConfigurationError("denominator polynomial is identically zero")
        num.setflags(write=False)
        den.setflags(write=False)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def create(num: Sequence[float], den: Sequence[float]) -> "TransferFunction":
        return TransferFunction(num=np.asarray(num, dtype=float), den=np.asarray(den, dtype=float))

    @property
    def is_proper(self) -> bool:
        return poly.degree(self.num) <= poly.degree(self.den)

    @property
    def order(self) -> int:
        return poly.degree(self.den)

    def __call__(self, s: complex) -> complex:
        return complex(np.polyval(self.num, s) / np.polyval(self.den, s))

    def scaled(self, gain: float) -> "TransferFunction":
        return TransferFunction.create(self.num * gain, self.den)

    def cancel_origin(self) -> "TransferFunction":
        """Remove the power of s common to numerator and denominator."""
        num, den = poly.cancel_origin(self.num, self.den)
        return TransferFunction.create(num, den)


@dataclass(frozen=True, eq=False)
class StateSpace:
    """
    x' = A x + B u, y = C x + D u with scalar input and output.
    B and C are stored as length-n vectors.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: float = 0.0

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        n = 0 if A.size == 0 else A.shape[0]
        A = A.reshape(n, n)
        B = np.asarray(self.B, dtype=float).reshape(-1)
        C = np.asarray(self.C, dtype=float).reshape(-1)
        if A.shape != (n, n) or B.shape != (n,) or C.shape != (n,):
            raise ConfigurationError(
                f"inconsistent realization: A {A.shape}, B {B.shape}, C {C.shape}"
            )
        for arr in (A, B, C):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", float(self.D))

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def derivative(self, x: np.ndarray, u: float) -> np.ndarray:
        return self.A @ x + self.B * u

    def output(self, x: np.ndarray, u: float = 0.0) -> float:
        return float(self.C @ x + self.D * u)


System = Union[TransferFunction, StateSpace]


# ----------------------------
# Identified servo-hydraulic table, valve voltage input
# ----------------------------
SHAKE_TABLE_NUM = (719.0, 3.13e6, 6.73e9, 7.83e13, 3.95e15, 0.0)
SHAKE_TABLE_ACCEL_DEN = (1.0, 309.0, 1.67e5, 3.2e7, 6.77e9, 7.5e11, 5.98e13)


def tf_shake_table_displacement() -> TransferFunction:
    """Voltage to table displacement; the denominator carries a double root at s = 0."""
    return TransferFunction.create(SHAKE_TABLE_NUM, SHAKE_TABLE_ACCEL_DEN + (0.0, 0.0))


def tf_shake_table_acceleration() -> TransferFunction:
    """Voltage to table acceleration (the displacement model times s^2)."""
    return TransferFunction.create(SHAKE_TABLE_NUM, SHAKE_TABLE_ACCEL_DEN)


# ----------------------------
# Realization
# ----------------------------
def to_state_space(tf: TransferFunction) -> StateSpace:
    """
    Controllable canonical form:

        A = [[-a1, -a2, ..., -an], [1, 0, ...], ..., [..., 1, 0]],  B = e1,
        C = b - D*a,  D = b0

    after dividing through by the leading denominator coefficient.
    """
    if not tf.is_proper:
        raise ImproperSystem(
            f"numerator degree {poly.degree(tf.num)} exceeds denominator degree {tf.order}"
        )
    lead = tf.den[0]
    a = tf.den / lead
    n = a.size - 1
    b = np.zeros(n + 1)
    b[n + 1 - tf.num.size:] = tf.num / lead

    D = b[0]
    if n == 0:
        return StateSpace(A=np.zeros((0, 0)), B=np.zeros(0), C=np.zeros(0), D=D)

    A = np.zeros((n, n))
    A[0, :] = -a[1:]
    A[1:, :-1] = np.eye(n - 1)
    B = np.zeros(n)
    B[0] = 1.0
    C = b[1:] - D * a[1:]
    return StateSpace(A=A, B=B, C=C, D=D)


# ----------------------------
# Frequency response
# ----------------------------
def _tf_response(tf: TransferFunction, s: complex) -> complex:
    den = np.polyval(tf.den, s)
    if abs(den) <= 64 * np.finfo(float).eps * poly.magnitude_scale(tf.den, s):
        raise SingularAtFrequency(f"denominator vanishes at s = {s}")
    return complex(np.polyval(tf.num, s) / den)


def _ss_response(ss: StateSpace, s: complex) -> complex:
    if ss.n == 0:
        return complex(ss.D)
    # Diagonal similarity keeps companion matrices well conditioned
    A_bal, (scale, _) = matrix_balance(ss.A, permute=False, separate=True)
    B_bal = ss.B / scale
    C_bal = ss.C * scale
    M = s * np.eye(ss.n) - A_bal
    try:
        x = np.linalg.solve(M, B_bal.astype(complex))
        x = x + np.linalg.solve(M, B_bal - M @ x)
    except np.linalg.LinAlgError:
        raise SingularAtFrequency(f"sI - A is singular at s = {s}") from None
    if not np.all(np.isfinite(x)):
        raise SingularAtFrequency(f"sI - A is singular at s = {s}")
    return complex(C_bal @ x + ss.D)


def freq_response(sys: System, omega: float) -> complex:
    """H(j*omega) for a transfer function or a state-space realization."""
    if not np.isfinite(omega):
        raise ConfigurationError(f"frequency must be finite, got {omega}")
    s = 1j * float(omega)
    if isinstance(sys, TransferFunction):
        return _tf_response(sys, s)
    return _ss_response(sys, s)


def poles(tf: TransferFunction) -> np.ndarray:
    """Roots of the denominator with multiplicity."""
    return poly.roots(tf.den)


def zeros(tf: TransferFunction) -> np.ndarray:
    return poly.roots(tf.num)
