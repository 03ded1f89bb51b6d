"""
Real polynomials in descending-power coefficient form, and their roots.
"""

from typing import Sequence, Tuple

import numpy as np

from core.errors import ConvergenceFailure, ImproperSystem
from core.logger import get_logger

logger = get_logger(__name__)

MAX_ITERATIONS = 500
ROOT_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-8


def as_poly(coeffs: Sequence[float]) -> np.ndarray:
    """Coefficient array with leading zeros removed (at least one entry kept)."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=float)).reshape(-1)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(1)
    return c[nz[0]:].copy()


def degree(coeffs: Sequence[float]) -> int:
    return as_poly(coeffs).size - 1


def origin_multiplicity(coeffs: Sequence[float]) -> int:
    """Number of trailing zero coefficients, i.e. the order of the root at s = 0."""
    c = as_poly(coeffs)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return 0
    return int(c.size - 1 - nz[-1])


def strip_origin(coeffs: Sequence[float], count: int) -> np.ndarray:
    """Divide by s**count; the polynomial must have at least `count` trailing zeros."""
    c = as_poly(coeffs)
    if count == 0:
        return c
    if origin_multiplicity(c) < count:
        raise ImproperSystem(f"polynomial has fewer than {count} roots at the origin")
    return c[:-count].copy()


def cancel_origin(num: Sequence[float], den: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Cancel the common power of s shared by numerator and denominator."""
    common = min(origin_multiplicity(num), origin_multiplicity(den))
    return strip_origin(num, common), strip_origin(den, common)


def magnitude_scale(coeffs: Sequence[float], s) -> float:
    """sum |a_k| |s|^k, the natural yardstick for a residual at s."""
    return float(np.polyval(np.abs(as_poly(coeffs)), np.abs(s)))


def _durand_kerner(monic: np.ndarray) -> np.ndarray:
    """Simultaneous root iteration on a monic polynomial without roots at the origin."""
    n = monic.size - 1
    # Map roots onto the unit disk scale: s = rho * z
    k = np.arange(1, n + 1)
    rho = float(np.max(np.abs(monic[1:]) ** (1.0 / k)))
    if rho == 0.0:
        return np.zeros(n, dtype=complex)
    scaled = monic * rho ** (-np.arange(n + 1, dtype=float))

    z = np.exp(1j * (2.0 * np.pi * np.arange(n) / n + 0.4)) * 0.9
    eye = np.eye(n, dtype=bool)
    for iteration in range(1, MAX_ITERATIONS + 1):
        diffs = z[:, None] - z[None, :]
        diffs[eye] = 1.0
        step = np.polyval(scaled, z) / np.prod(diffs, axis=1)
        z = z - step
        movement = np.max(np.abs(step) / np.maximum(np.abs(z), 1e-300))
        if movement < ROOT_TOLERANCE:
            break
        # Multiple roots stall short of the movement tolerance; accept them on backward error
        residual = np.abs(np.polyval(scaled, z)) / np.polyval(np.abs(scaled), np.abs(z))
        if np.all(residual < 1e3 * np.finfo(float).eps):
            break
    else:
        raise ConvergenceFailure(
            f"Durand-Kerner did not converge in {MAX_ITERATIONS} iterations (degree {n})"
        )

    logger.debug(f"[POLY] degree {n} roots in {iteration} iterations")
    return z * rho


def roots(coeffs: Sequence[float]) -> np.ndarray:
    """
    All complex roots with multiplicity, sorted by (real, imag).

    Exact roots at the origin are split off from the trailing zero coefficients;
    the rest are found with Durand-Kerner iteration on the scaled monic polynomial.
    """
    c = as_poly(coeffs)
    if c.size == 1:
        return np.zeros(0, dtype=complex)

    at_origin = origin_multiplicity(c)
    core_poly = c[: c.size - at_origin] / c[0]
    n = core_poly.size - 1

    if n == 0:
        found = np.zeros(0, dtype=complex)
    elif n == 1:
        found = np.array([-core_poly[1]], dtype=complex)
    else:
        found = _durand_kerner(core_poly)

    # Snap numerically real roots of a real polynomial onto the axis
    tiny_imag = np.abs(found.imag) <= 1e-10 * np.maximum(np.abs(found), 1.0)
    found = np.where(tiny_imag, found.real + 0j, found)

    result = np.concatenate([found, np.zeros(at_origin, dtype=complex)])
    order = np.lexsort((result.imag, result.real))
    return result[order]


def from_roots(values: Sequence[complex]) -> np.ndarray:
    """Monic real polynomial with the given conjugate-closed roots."""
    p = np.poly(np.asarray(values, dtype=complex))
    return np.real_if_close(p, tol=1e6).real.astype(float)


def root_residuals(coeffs: Sequence[float], values: Sequence[complex]) -> np.ndarray:
    """|p(root)| / sum |a_k||root|^k for each root."""
    c = as_poly(coeffs)
    values = np.asarray(values, dtype=complex)
    scale = np.polyval(np.abs(c), np.abs(values))
    scale = np.where(scale == 0.0, 1.0, scale)
    return np.abs(np.polyval(c, values)) / scale
