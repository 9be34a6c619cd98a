"""
Special Functions

This module implements the exterior map of the interval [-2, 2], the monic
Chebyshev and ultraspherical polynomials evaluated by three-term recurrence,
the Bessel functions of orders 0, 1/2 and 1, and sign-tracking Gamma ratios.
All functions accept scalars or numpy arrays and broadcast elementwise.
"""

from typing import Literal, Sequence, Union

import numpy as np
from scipy import special

try:
    from typing import TypeAlias
except ImportError:  # Python < 3.10
    from typing_extensions import TypeAlias

from ..core.errors import DomainError

ArrayLike: TypeAlias = Union[complex, float, np.ndarray]
ChebyshevKind: TypeAlias = Literal["first", "second"]

SUPPORTED_ALPHAS = (0.5, 1.0, 1.5)
SUPPORTED_BESSEL_ORDERS = (0.0, 0.5, 1.0)

# Below this modulus 2*J_1(z)/z is evaluated from its Taylor series
TILDE_J1_SERIES_RADIUS = 1e-3


def _as_complex(z: ArrayLike) -> np.ndarray:
    """Return z as a complex array with +0.0 imaginary parts on the real axis"""
    z = np.asarray(z, dtype=complex)
    return np.where(z.imag == 0, z.real + 0j, z)


def _squeeze(value: np.ndarray, like: ArrayLike):
    """Return a Python scalar when the input was a scalar"""
    if np.ndim(like) == 0:
        return value[()]
    return value


def joukowski_phi(z: ArrayLike):
    """
    Evaluate the exterior map Phi(z) = (z + sqrt(z^2 - 4)) / 2.

    The square root is taken as sqrt(z - 2) * sqrt(z + 2), the branch that is
    holomorphic off [-2, 2] and satisfies |Phi| >= 1. On the cut the value is
    the boundary value from the upper half-plane.

    Args:
        z: Complex scalar or array

    Returns:
        Phi(z) with the same shape as z
    """
    zc = _as_complex(z)
    phi = 0.5 * (zc + np.sqrt(zc - 2.0) * np.sqrt(zc + 2.0))
    return _squeeze(phi, z)


def joukowski_phi_trace(x: ArrayLike, side: int = 1):
    """
    Evaluate the boundary traces Phi_+ (side=1) or Phi_- (side=-1) on [-2, 2].

    Args:
        x: Real scalar or array in [-2, 2]
        side: +1 for the upper trace, -1 for the lower trace

    Returns:
        (x + side * i * sqrt(4 - x^2)) / 2
    """
    if side not in (1, -1):
        raise DomainError(f"Trace side must be +1 or -1, got {side}")
    xr = np.asarray(x, dtype=float)
    if np.any(np.abs(xr) > 2.0):
        raise DomainError("Boundary traces are defined on [-2, 2] only")
    trace = 0.5 * (xr + side * 1j * np.sqrt(4.0 - xr * xr))
    return _squeeze(trace, x)


def joukowski_phi_prime(z: ArrayLike):
    """Derivative Phi'(z) = Phi(z)^2 / (Phi(z)^2 - 1); infinite at z = +-2"""
    phi = np.asarray(joukowski_phi(z), dtype=complex)
    phi2 = phi * phi
    with np.errstate(divide="ignore", invalid="ignore"):
        value = phi2 / (phi2 - 1.0)
    return _squeeze(value, z)


def cheb_table(kind: ChebyshevKind, n_max: int, z: ArrayLike) -> np.ndarray:
    """
    Tabulate monic Chebyshev polynomials for [-2, 2] by recurrence.

    The second kind starts U_0 = 1, U_1 = z; the first kind starts T_0 = 2,
    T_1 = z (so that T_m = Phi^m + Phi^-m). Both use P_{k+1} = z P_k - P_{k-1}.

    Args:
        kind: "first" or "second"
        n_max: Highest degree
        z: Complex scalar or array

    Returns:
        Array of shape (n_max + 1,) + shape(z)
    """
    if kind not in ("first", "second"):
        raise DomainError(f"Unknown Chebyshev kind: {kind}")
    if n_max < 0:
        raise DomainError(f"Degree must be nonnegative, got {n_max}")

    zc = np.asarray(z, dtype=complex)
    table = np.empty((n_max + 1,) + zc.shape, dtype=complex)
    table[0] = 2.0 if kind == "first" else 1.0
    if n_max >= 1:
        table[1] = zc
    for k in range(1, n_max):
        table[k + 1] = zc * table[k] - table[k - 1]
    return table


def cheb(kind: ChebyshevKind, n: int, z: ArrayLike):
    """Evaluate the monic Chebyshev polynomial T_n or U_n for [-2, 2]"""
    return _squeeze(cheb_table(kind, n, z)[n], z)


def cheb_scaled_table(n_max: int, z: ArrayLike) -> np.ndarray:
    """
    Tabulate V_n = U_n(z) / Phi(z)^n for n <= n_max.

    V_n stays bounded off the cut for any n, which lets exterior kernels be
    rescaled by Phi^-N without overflow.

    Args:
        n_max: Highest degree
        z: Complex scalar or array

    Returns:
        Array of shape (n_max + 1,) + shape(z)
    """
    zc = _as_complex(z)
    phi = np.asarray(joukowski_phi(zc), dtype=complex)
    ratio = zc / phi
    inv_phi2 = 1.0 / (phi * phi)
    table = np.empty((n_max + 1,) + zc.shape, dtype=complex)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = ratio
    for k in range(1, n_max):
        table[k + 1] = ratio * table[k] - inv_phi2 * table[k - 1]
    return table


def _check_alpha(alpha: float) -> float:
    for supported in SUPPORTED_ALPHAS:
        if abs(alpha - supported) < 1e-12:
            return supported
    raise DomainError(f"Gegenbauer parameter must be one of {SUPPORTED_ALPHAS}")


def gegenbauer_table(n_max: int, alpha: float, x: ArrayLike) -> np.ndarray:
    """
    Tabulate classical ultraspherical polynomials C_n^(alpha)(x).

    Forward recurrence
    (k + 1) C_{k+1} = 2 x (k + alpha) C_k - (k + 2 alpha - 1) C_{k-1}.

    Args:
        n_max: Highest degree
        alpha: One of 1/2, 1, 3/2
        x: Complex scalar or array

    Returns:
        Array of shape (n_max + 1,) + shape(x)
    """
    alpha = _check_alpha(alpha)
    if n_max < 0:
        raise DomainError(f"Degree must be nonnegative, got {n_max}")

    xc = np.asarray(x, dtype=complex)
    table = np.empty((n_max + 1,) + xc.shape, dtype=complex)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = 2.0 * alpha * xc
    for k in range(1, n_max):
        table[k + 1] = (
            2.0 * xc * (k + alpha) * table[k] - (k + 2.0 * alpha - 1.0) * table[k - 1]
        ) / (k + 1.0)
    return table


def gegenbauer(n: int, alpha: float, x: ArrayLike):
    """Evaluate the ultraspherical polynomial C_n^(alpha)(x)"""
    return _squeeze(gegenbauer_table(n, alpha, x)[n], x)


def _check_order(nu: float) -> float:
    for supported in SUPPORTED_BESSEL_ORDERS:
        if abs(nu - supported) < 1e-12:
            return supported
    raise DomainError(f"Bessel order must be one of {SUPPORTED_BESSEL_ORDERS}")


def bessel_j(nu: float, z: ArrayLike):
    """Bessel function of the first kind J_nu(z) for nu in {0, 1/2, 1}"""
    nu = _check_order(nu)
    zc = np.asarray(z, dtype=complex)
    return _squeeze(special.jv(nu, zc), z)


def bessel_j_prime(nu: float, z: ArrayLike):
    """Derivative J_nu'(z) for nu in {0, 1/2, 1}"""
    nu = _check_order(nu)
    zc = np.asarray(z, dtype=complex)
    return _squeeze(special.jvp(nu, zc, 1), z)


def tilde_j(nu: float, z: ArrayLike):
    """
    Entire Bessel function (2/z)^nu J_nu(z).

    Args:
        nu: One of 0, 1/2, 1
        z: Complex scalar or array

    Returns:
        Values with tilde_j(nu, 0) = 1 / Gamma(nu + 1)
    """
    nu = _check_order(nu)
    zc = np.asarray(z, dtype=complex)
    if nu == 0.0:
        value = special.jv(0.0, zc)
    elif nu == 0.5:
        # sin(z)/z through numpy's normalized sinc
        value = (2.0 / np.sqrt(np.pi)) * np.sinc(zc / np.pi)
    else:
        small = np.abs(zc) < TILDE_J1_SERIES_RADIUS
        safe = np.where(small, 1.0, zc)
        z2 = zc * zc
        series = 1.0 - z2 / 8.0 + z2 * z2 / 192.0
        value = np.where(small, series, 2.0 * special.jv(1.0, safe) / safe)
    return _squeeze(np.asarray(value, dtype=complex), z)


def gamma_product_ratio(
    numerators: Sequence[float], denominators: Sequence[float]
) -> float:
    """
    Evaluate prod Gamma(numerators) / prod Gamma(denominators).

    Log-Gamma differences with sign tracking; a denominator at a pole makes
    the ratio exactly zero.

    Args:
        numerators: Real Gamma arguments in the numerator
        denominators: Real Gamma arguments in the denominator

    Returns:
        The ratio as a float

    Raises:
        DomainError: If a numerator argument is a nonpositive integer
    """
    for a in numerators:
        if _is_pole(a):
            raise DomainError(f"Gamma pole in numerator at {a}")
    if any(_is_pole(b) for b in denominators):
        return 0.0

    sign = 1.0
    log_value = 0.0
    for a in numerators:
        sign *= float(special.gammasgn(a))
        log_value += float(special.gammaln(a))
    for b in denominators:
        sign *= float(special.gammasgn(b))
        log_value -= float(special.gammaln(b))
    return sign * float(np.exp(log_value))


def _is_pole(a: float) -> bool:
    return a <= 0 and float(a).is_integer()


def gamma_ratio(a: float, b: float) -> float:
    """
    Evaluate Gamma(a) / Gamma(b) without intermediate overflow.

    Args:
        a: Numerator argument
        b: Denominator argument

    Returns:
        The ratio

    Raises:
        DomainError: If a or b is a nonpositive integer
    """
    if _is_pole(a) or _is_pole(b):
        raise DomainError(f"Gamma pole in gamma_ratio({a}, {b})")
    return gamma_product_ratio([a], [b])


def joukowski_log_modulus(z: ArrayLike):
    """log |Phi(z)|, exactly zero on [-2, 2] and never negative"""
    zc = _as_complex(z)
    value = np.maximum(np.log(np.abs(joukowski_phi(zc))), 0.0)
    on_cut = (zc.imag == 0) & (np.abs(zc.real) <= 2.0)
    return _squeeze(np.where(on_cut, 0.0, value), z)


def cheb_weighted_table(n_max: int, s: float, z: ArrayLike) -> np.ndarray:
    """
    Tabulate |Phi(z)|^-s U_n(z) for n <= n_max without overflow.

    Written as V_n(z) (Phi/|Phi|)^n exp((n - s) log|Phi|) with the scaled
    table V_n, so every factor stays bounded while n < s.

    Args:
        n_max: Highest degree
        s: Weight exponent
        z: Complex scalar or array

    Returns:
        Array of shape (n_max + 1,) + shape(z)
    """
    zc = _as_complex(z)
    degrees = np.arange(n_max + 1).reshape((-1,) + (1,) * zc.ndim)
    phi = np.asarray(joukowski_phi(zc), dtype=complex)
    log_modulus = np.asarray(joukowski_log_modulus(zc))
    phase = phi / np.abs(phi)
    scaled = cheb_scaled_table(n_max, zc)
    return scaled * phase**degrees * np.exp((degrees - s) * log_modulus)
