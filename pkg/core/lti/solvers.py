"""
Dense solvers for small control-design problems: the Lyapunov equation
A^T P + P A = -I and single-input pole placement.
"""

from typing import Sequence

import numpy as np

from core.errors import ConfigurationError, NotHurwitz, SingularSystem, Uncontrollable
from core.logger import get_logger
from core.lti import polynomials as poly

logger = get_logger(__name__)


def is_hurwitz(A: np.ndarray) -> bool:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return bool(np.all(np.linalg.eigvals(A).real < 0.0))


def lyapunov_residual(A: np.ndarray, P: np.ndarray, Q: np.ndarray = None) -> float:
    """max |A^T P + P A + Q|, Q defaults to I."""
    A = np.asarray(A, dtype=float)
    Q = np.eye(A.shape[0]) if Q is None else Q
    return float(np.max(np.abs(A.T @ P + P @ A + Q)))


def solve_lyapunov(A_r: np.ndarray) -> np.ndarray:
    """
    Symmetric positive-definite P with A_r^T P + P A_r = -I.

    Solved as the vectorized system (I kron A^T + A^T kron I) vec(P) = -vec(I)
    with one step of iterative refinement.
    """
    A = np.atleast_2d(np.asarray(A_r, dtype=float))
    n = A.shape[0]
    if A.shape != (n, n):
        raise ConfigurationError(f"A_r must be square, got {A.shape}")
    eigs = np.linalg.eigvals(A)
    if not np.all(eigs.real < 0.0):
        raise NotHurwitz(f"A_r has eigenvalues with Re >= 0: {np.round(eigs, 6)}")

    eye = np.eye(n)
    lhs = np.kron(eye, A.T) + np.kron(A.T, eye)
    rhs = -eye.reshape(-1, order="F")
    try:
        vec_p = np.linalg.solve(lhs, rhs)
        vec_p = vec_p + np.linalg.solve(lhs, rhs - lhs @ vec_p)
    except np.linalg.LinAlgError as e:
        raise SingularSystem(f"Lyapunov operator is singular: {e}") from e

    P = vec_p.reshape(n, n, order="F")
    P = 0.5 * (P + P.T)
    if not np.all(np.isfinite(P)):
        raise SingularSystem("Lyapunov solution is not finite")
    try:
        np.linalg.cholesky(P)
    except np.linalg.LinAlgError:
        raise NotHurwitz("Lyapunov solution is not positive definite") from None

    logger.debug(f"[LYAP] residual={lyapunov_residual(A, P):.3e} max|P|={np.max(np.abs(P)):.3e}")
    return P


def controllability_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """[B, AB, ..., A^(n-1) B] for a single input."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(B, dtype=float).reshape(-1)
    cols = [b]
    for _ in range(A.shape[0] - 1):
        cols.append(A @ cols[-1])
    return np.column_stack(cols)


def _matrix_polynomial(coeffs: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Horner evaluation of sum c_k A^(n-k)."""
    result = np.zeros_like(A)
    eye = np.eye(A.shape[0])
    for c in coeffs:
        result = result @ A + c * eye
    return result


def _conjugate_closed(desired: np.ndarray) -> bool:
    remaining = list(desired)
    while remaining:
        p = remaining.pop()
        if abs(p.imag) <= 1e-12 * max(1.0, abs(p)):
            continue
        match = [i for i, q in enumerate(remaining) if abs(q - np.conj(p)) <= 1e-9 * max(1.0, abs(p))]
        if not match:
            return False
        remaining.pop(match[0])
    return True


def place_poles(A: np.ndarray, B: np.ndarray, desired: Sequence[complex]) -> np.ndarray:
    """
    Gain K (length n) such that eig(A - B K) equals `desired`, via Ackermann's formula:

        K = e_n^T  Ctrb^-1  phi(A),   phi = prod (s - p_i)
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    desired = np.asarray(desired, dtype=complex).reshape(-1)
    if desired.size != n:
        raise ConfigurationError(f"need {n} desired poles, got {desired.size}")
    if not _conjugate_closed(desired):
        raise ConfigurationError(f"desired poles are not closed under conjugation: {desired}")

    ctrb = controllability_matrix(A, B)
    rank = np.linalg.matrix_rank(ctrb)
    if rank < n:
        raise Uncontrollable(f"controllability matrix has rank {rank} < {n}")

    phi = _matrix_polynomial(poly.from_roots(desired), A)
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    try:
        row = np.linalg.solve(ctrb.T, e_n)
    except np.linalg.LinAlgError as e:
        raise Uncontrollable(f"controllability matrix is singular: {e}") from e
    K = row @ phi

    logger.debug(f"[PLACE] poles={np.round(desired, 6)} K={K}")
    return K


def characteristic_polynomial(A: np.ndarray) -> np.ndarray:
    """Coefficients of det(sI - A), descending powers."""
    return np.real(np.poly(np.atleast_2d(np.asarray(A, dtype=float))))
