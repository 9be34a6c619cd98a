"""
Dense Linear Algebra

This module implements the skew-symmetric matrix type and its Pfaffian by
Parlett-Reid tridiagonalization with partial pivoting, an LU determinant,
and polynomial root finding by companion matrix eigenvalues followed by
Newton polishing and conjugate pairing.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from ..core.errors import DegeneratePolynomialError, ValidationError

logger = logging.getLogger("mahler_kernels.linalg")

# Relative antisymmetry tolerance for SkewMatrix construction
SKEW_TOLERANCE = 1e-12

# Conjugate pairing tolerance relative to the root scale
PAIRING_TOLERANCE = 1e-8

# Newton polishing steps per root
POLISH_STEPS = 3

# Leading coefficients below this fraction of the coefficient norm are degenerate
DEGENERATE_LEADING = 1e-14


class SkewMatrix:
    """Even-dimensional skew-symmetric matrix"""

    def __init__(self, entries, check: bool = True):
        """
        Build a skew matrix.

        Args:
            entries: Square array-like, real or complex
            check: Verify antisymmetry to SKEW_TOLERANCE relative to the scale

        Raises:
            ValidationError: For non-square, odd or non-skew input
        """
        a = np.array(entries)
        if a.dtype.kind not in "fc":
            a = a.astype(float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"Skew matrix must be square, got shape {a.shape}")
        if a.shape[0] % 2:
            raise ValidationError(
                f"Skew matrix dimension must be even, got {a.shape[0]}"
            )
        if check and a.size:
            scale = max(1.0, float(np.max(np.abs(a))))
            residual = float(np.max(np.abs(a + a.T)))
            if residual > SKEW_TOLERANCE * scale:
                raise ValidationError(
                    f"Matrix is not skew-symmetric (residual {residual:.3e})"
                )
        self.entries = a

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_upper(cls, dimension: int, upper: dict) -> "SkewMatrix":
        """Build from a mapping {(i, j): value} with i < j (1-based indices)"""
        a = np.zeros((dimension, dimension), dtype=complex)
        for (i, j), value in upper.items():
            a[i - 1, j - 1] = value
            a[j - 1, i - 1] = -value
        if not np.any(a.imag):
            a = a.real
        return cls(a)

    def swapped(self, i: int, j: int) -> "SkewMatrix":
        """Return a copy with rows and columns i and j exchanged"""
        order = np.arange(self.dimension)
        order[[i, j]] = order[[j, i]]
        return SkewMatrix(self.entries[np.ix_(order, order)], check=False)


def pfaffian(matrix) -> complex:
    """
    Compute the Pfaffian of a skew-symmetric matrix.

    Reduces the matrix to tridiagonal form with Gauss transformations,
    pivoting on the largest entry of each column below the subdiagonal.
    Every row and column swap flips the sign.

    Args:
        matrix: SkewMatrix or skew-symmetric array-like

    Returns:
        Pf(A), a float for real input and a complex otherwise
    """
    if not isinstance(matrix, SkewMatrix):
        matrix = SkewMatrix(matrix)
    a = matrix.entries.copy()
    n = a.shape[0]
    if n == 0:
        return 1.0

    result = 1.0 + 0.0 * a[0, 0]
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1 :, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            result = -result

        if a[k + 1, k] == 0.0:
            return 0.0 * result

        result = result * a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2 :] / a[k, k + 1]
            column = a[k + 2 :, k + 1].copy()
            a[k + 2 :, k + 2 :] += np.outer(tau, column) - np.outer(column, tau)

    return result


def determinant(matrix) -> complex:
    """
    Determinant by LU factorization with partial pivoting.

    Args:
        matrix: Square array-like

    Returns:
        det(M); exactly 0.0 when a pivot vanishes
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"Determinant needs a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        return 1.0
    sign, logdet = np.linalg.slogdet(m)
    if sign == 0:
        return 0.0 * sign
    return sign * np.exp(logdet)


def _coefficients(f) -> np.ndarray:
    """Degree-ascending coefficients of a PolynomialCoeffs or an array"""
    c = np.asarray(getattr(f, "coeffs", f))
    if c.ndim != 1 or c.size < 1:
        raise ValidationError("Polynomial coefficients must be a non-empty vector")
    scale = float(np.max(np.abs(c)))
    if scale == 0.0 or abs(c[-1]) <= DEGENERATE_LEADING * scale:
        raise DegeneratePolynomialError("Leading coefficient is numerically zero")
    return c


def _polish(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Newton steps on all roots at once, keeping only improving steps"""
    dcoeffs = P.polyder(coeffs)
    roots = roots.astype(complex)
    value = P.polyval(roots, coeffs)
    for _ in range(POLISH_STEPS):
        slope = P.polyval(roots, dcoeffs)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(slope != 0, value / slope, 0.0)
        candidate = roots - step
        new_value = P.polyval(candidate, coeffs)
        better = np.isfinite(candidate) & (np.abs(new_value) < np.abs(value))
        roots = np.where(better, candidate, roots)
        value = np.where(better, new_value, value)
    return roots


def pair_conjugates(roots: np.ndarray, tol: float = PAIRING_TOLERANCE) -> np.ndarray:
    """
    Make a root multiset exactly closed under conjugation.

    Roots with |Im| below tol times the root scale become real. The rest are
    matched greedily, each upper half-plane root with the nearest conjugate of
    a lower half-plane root, and each pair is symmetrized. Unmatched roots are
    made real.

    Returns:
        Real roots in ascending order followed by conjugate pairs (upper
        member first), as a complex array
    """
    roots = np.asarray(roots, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(roots), initial=0.0)))
    cutoff = tol * scale

    real = [r.real for r in roots if abs(r.imag) < cutoff]
    upper = [r for r in roots if r.imag >= cutoff]
    lower = [r for r in roots if r.imag <= -cutoff]

    pairs = []
    remaining = list(lower)
    for r in sorted(upper, key=lambda z: (z.real, z.imag)):
        if not remaining:
            real.append(r.real)
            continue
        distances = [abs(r - np.conj(q)) for q in remaining]
        best = int(np.argmin(distances))
        q = remaining.pop(best)
        mean = 0.5 * (r + np.conj(q))
        pairs.append(complex(mean.real, abs(mean.imag)))
    real.extend(q.real for q in remaining)

    ordered = [complex(x, 0.0) for x in sorted(real)]
    for z in pairs:
        ordered.extend([z, z.conjugate()])
    return np.array(ordered, dtype=complex)


def poly_roots(f, real_coefficients: Optional[bool] = None) -> np.ndarray:
    """
    All roots of a polynomial with multiplicity.

    Args:
        f: PolynomialCoeffs or degree-ascending coefficient vector
        real_coefficients: Force or suppress conjugate pairing; by default
            pairing is applied when every coefficient is real

    Returns:
        Complex array of the N roots

    Raises:
        DegeneratePolynomialError: If the leading coefficient vanishes
    """
    c = _coefficients(f)
    if c.size == 1:
        return np.zeros(0, dtype=complex)
    roots = np.roots(c[::-1])
    roots = _polish(c, roots)
    if real_coefficients is None:
        real_coefficients = not np.any(np.imag(c))
    if real_coefficients:
        roots = pair_conjugates(roots)
    return roots


def batch_poly_roots(coeffs: np.ndarray) -> np.ndarray:
    """
    Roots of many polynomials of the same degree.

    Companion matrices are stacked and passed to numpy's batched eigenvalue
    routine, then polished row by row. No conjugate pairing is done here.

    Args:
        coeffs: Array of shape (count, N + 1), degree-ascending

    Returns:
        Array of shape (count, N)
    """
    c = np.asarray(coeffs)
    count, size = c.shape
    degree = size - 1
    if degree < 1:
        return np.zeros((count, 0), dtype=complex)
    monic = c[:, :-1] / c[:, -1:]
    companion = np.zeros((count, degree, degree), dtype=complex)
    companion[:, 1:, :-1] = np.eye(degree - 1)
    companion[:, :, -1] = -monic
    roots = np.linalg.eigvals(companion)
    return np.stack([_polish(row, r) for row, r in zip(c, roots)])


def residual_scale(f, roots: Sequence[complex]) -> float:
    """Max |f(root)| relative to the coefficient scale sum |a_k| max(1, |r|)^k"""
    c = np.asarray(getattr(f, "coeffs", f))
    r = np.asarray(roots, dtype=complex)
    if r.size == 0:
        return 0.0
    values = np.abs(P.polyval(r, c))
    bound = P.polyval(np.maximum(1.0, np.abs(r)), np.abs(c))
    return float(np.max(values / bound))
