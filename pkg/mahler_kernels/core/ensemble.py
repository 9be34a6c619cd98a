"""
Ensemble Parameters and Mahler Measures

This module defines the ensemble parameters (N, s, field), the weight
phi(z) = |Phi(z)|^-s, the equilibrium potential, polynomial coefficient
vectors and both the disk and the reciprocal Mahler measures.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Union

import numpy as np
from dataclasses_json import dataclass_json
from numpy.polynomial import polynomial as P

from ..numerics import specfun
from ..numerics.linalg import poly_roots
from .errors import DegeneratePolynomialError, DomainError, ValidationError

# Roots this close to the unit circle count as exactly on it
DISK_GUARD = 1e-12

# Roots whose |Phi| is this close to 1 count as lying on [-2, 2]
INTERVAL_GUARD = 1e-12


class Field(str, Enum):
    """Coefficient field of the random polynomials"""

    REAL = "real"
    COMPLEX = "complex"


@dataclass_json
@dataclass(frozen=True)
class EnsembleParams:
    """
    Parameters of a reciprocal Mahler ensemble.

    Attributes:
        n: Number of points (polynomial degree)
        s: Weight exponent, strictly larger than n
        field: Real or complex coefficients; the real ensemble needs even n
    """

    n: int
    s: float
    field: Field = Field.COMPLEX

    def __post_init__(self):
        if isinstance(self.field, str) and not isinstance(self.field, Field):
            try:
                object.__setattr__(self, "field", Field(self.field))
            except ValueError:
                raise ValidationError(f"Unknown field: {self.field}") from None
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"N must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if not math.isfinite(self.s) or self.s <= self.n:
            raise ValidationError(
                f"s must be finite and exceed N={self.n}, got {self.s}"
            )
        if self.field is Field.REAL and self.n % 2:
            raise ValidationError(f"The real ensemble needs even N, got {self.n}")

    @property
    def lambda_eff(self) -> float:
        """Finite-N surrogate N/s of the limit parameter lambda"""
        return self.n / self.s

    @property
    def c_eff(self) -> float:
        """Finite-N surrogate s - N of the limit parameter c"""
        return self.s - self.n

    @property
    def sampler_lambda(self) -> float:
        """Homogeneity exponent (N + 1)/s of the matching starbody"""
        return (self.n + 1) / self.s

    @property
    def is_real(self) -> bool:
        return self.field is Field.REAL

    def require(self, field: Field) -> None:
        """Raise unless the parameters belong to the given field"""
        if self.field is not field:
            raise ValidationError(
                f"Operation needs field={field.value}, got {self.field.value}"
            )


class PolynomialCoeffs:
    """Coefficient vector of a degree-N polynomial, degree-ascending"""

    def __init__(self, coeffs: Sequence[complex]):
        c = np.array(coeffs)
        if c.dtype.kind not in "fc":
            c = c.astype(float)
        if c.ndim != 1 or c.size < 1:
            raise ValidationError("Coefficients must be a non-empty vector")
        if not np.all(np.isfinite(c)):
            raise ValidationError("Coefficients must be finite")
        scale = float(np.max(np.abs(c)))
        if scale == 0.0 or abs(c[-1]) <= 1e-14 * scale:
            raise DegeneratePolynomialError("Leading coefficient is numerically zero")
        self.coeffs = c

    def __repr__(self) -> str:
        return f"PolynomialCoeffs({self.coeffs.tolist()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PolynomialCoeffs) and np.array_equal(
            self.coeffs, other.coeffs
        )

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @property
    def is_real(self) -> bool:
        return not np.any(np.imag(self.coeffs))

    def evaluate(self, z):
        """Evaluate f(z) by Horner's rule"""
        return P.polyval(z, self.coeffs)

    def scaled(self, t: complex) -> "PolynomialCoeffs":
        return PolynomialCoeffs(t * self.coeffs)

    def roots(self) -> np.ndarray:
        return poly_roots(self)

    def reciprocal_expansion(self) -> "PolynomialCoeffs":
        """
        Coefficients of z^N f(z + 1/z), a palindromic polynomial of degree 2N.

        z^N f(z + 1/z) = sum_k a_k (z^2 + 1)^k z^(N - k)
        """
        n = self.degree
        total = np.zeros(2 * n + 1, dtype=self.coeffs.dtype)
        for k, a in enumerate(self.coeffs):
            term = P.polypow([1.0, 0.0, 1.0], k)
            total[n - k : n - k + term.size] += a * term
        return PolynomialCoeffs(total)

    def to_pairs(self) -> List[List[float]]:
        """JSON form: [re, im] pairs in degree-ascending order"""
        c = np.asarray(self.coeffs, dtype=complex)
        return [[float(x.real), float(x.imag)] for x in c]

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "PolynomialCoeffs":
        values = np.array([complex(re, im) for re, im in pairs])
        if not np.any(values.imag):
            values = values.real
        return cls(values)


def weight_phi(params: EnsembleParams, z):
    """
    Evaluate the weight phi(z) = |Phi(z)|^-s.

    Args:
        params: Ensemble parameters
        z: Complex scalar or array

    Returns:
        Values in (0, 1], equal to 1 on [-2, 2]
    """
    return np.exp(-params.s * specfun.joukowski_log_modulus(z))


def potential_v(params: EnsembleParams, z):
    """Equilibrium potential V(z) = s log |Phi(z)|, so that phi = exp(-V)"""
    return params.s * specfun.joukowski_log_modulus(z)


PolynomialLike = Union[PolynomialCoeffs, Sequence[complex], np.ndarray]


def _as_polynomial(f: PolynomialLike) -> PolynomialCoeffs:
    return f if isinstance(f, PolynomialCoeffs) else PolynomialCoeffs(f)


def _check_lambda(lam: float) -> None:
    if not lam >= 0 or not math.isfinite(lam):
        raise DomainError(f"lambda must be finite and nonnegative, got {lam}")


def mahler(lam: float, f: PolynomialLike) -> float:
    """
    Homogeneous Mahler measure |a|^lambda prod max(1, |alpha|).

    Args:
        lam: Homogeneity exponent lambda >= 0
        f: Polynomial coefficients

    Returns:
        The measure; roots within DISK_GUARD of the unit circle contribute 1
    """
    _check_lambda(lam)
    f = _as_polynomial(f)
    moduli = np.abs(f.roots())
    factors = np.where(np.abs(moduli - 1.0) < DISK_GUARD, 1.0, np.maximum(1.0, moduli))
    leading = abs(f.leading) ** lam if lam else 1.0
    return float(leading * np.prod(factors))


def mahler_rec(lam: float, f: PolynomialLike) -> float:
    """
    Reciprocal Mahler measure |a|^lambda prod |Phi(alpha)|.

    Equal to the Mahler measure of f(z + 1/z).

    Args:
        lam: Homogeneity exponent lambda >= 0
        f: Polynomial coefficients

    Returns:
        The measure; roots with |Phi| within INTERVAL_GUARD of 1 contribute 1
    """
    _check_lambda(lam)
    f = _as_polynomial(f)
    moduli = np.abs(np.asarray(specfun.joukowski_phi(f.roots())))
    factors = np.where(moduli - 1.0 < INTERVAL_GUARD, 1.0, moduli)
    leading = abs(f.leading) ** lam if lam else 1.0
    return float(leading * np.prod(factors))
