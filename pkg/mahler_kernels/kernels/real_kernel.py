"""
Real Ensemble Matrix Kernel

This module implements the orto-kernel kappa_N of the real reciprocal
Mahler ensemble, the eps transforms of phi pi_n in closed form, the 2 x 2
matrix kernel, Pfaffian correlation functions R_{l,m} and the expected
numbers of real and complex roots.

For a function f, eps(f)(x) = (1/2) int f(t) sgn(t - x) dt on the real
line, and eps(f)(z) = i sgn(Im z) f(conj z) off it.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from dataclasses_json import dataclass_json

from ..core.ensemble import EnsembleParams
from ..core.errors import DomainError
from ..numerics import quadrature, specfun
from ..numerics.linalg import SkewMatrix, pfaffian
from ..numerics.quadrature import QuadratureSpec
from .skew_system import SkewBasis, odd_eps_coefficients, u_eps_table

logger = logging.getLogger("mahler_kernels.real_kernel")

# Real arguments closer than this are equal for the sign term
SIGN_TOLERANCE = 1e-12

# Pfaffian correlations below this are reported as zero
CORRELATION_FLOOR = -1e-9


@dataclass
class MatrixKernelValue:
    """The four entries of the 2 x 2 matrix kernel at a pair of points"""

    kappa: complex
    kappa_eps: complex
    eps_kappa: complex
    eps_kappa_eps_plus_sgn: complex

    def as_block(self) -> np.ndarray:
        return np.array(
            [
                [self.kappa, self.kappa_eps],
                [self.eps_kappa, self.eps_kappa_eps_plus_sgn],
            ]
        )


def _real_eps_all(basis: SkewBasis, x: np.ndarray) -> np.ndarray:
    """eps(phi pi_n)(x) for real x, closed forms on and off [-2, 2]"""
    x = np.asarray(x, dtype=float)
    params = basis.params
    n_max = params.n
    inside = np.abs(x) <= 2.0
    y = np.where(inside, x, 0.0) / 2.0
    legendre = specfun.gegenbauer_table(n_max, 0.5, y).real

    # Outside [-2, 2] every eps comes from the U expansion
    far = np.where(inside, 3.0, x)
    far_table = u_eps_table(params.s, n_max - 1, far)
    exterior = np.tensordot(basis.u_table, far_table, axes=1)

    values = np.empty((n_max,) + x.shape)
    for m in range(n_max):
        k = m // 2
        if m % 2 == 0:
            interior = -(4 * k + 3) / 8.0 * legendre[m + 1]
        else:
            upper, lower = odd_eps_coefficients(params, k)
            interior = (
                -2.0 / (4 * k + 3) * (upper * legendre[m + 1] - lower * legendre[m - 1])
                + basis.delta(k)
            )
        values[m] = np.where(inside, interior, exterior[m])

    if basis.perturbation is not None:
        j = basis.perturbation.index
        shift = basis.perturbation.delta * u_eps_table(params.s, j, x)[j]
        # the exterior branch already carries the perturbation through the U table
        values[j] = np.where(inside, values[j] + shift, values[j])
    return values


def eps_all(basis: SkewBasis, z) -> np.ndarray:
    """
    eps(phi pi_n) at real or complex arguments for all n.

    Real arguments use the closed forms; nonreal ones use
    i sgn(Im z) phi(conj z) pi_n(conj z).

    Returns:
        Complex array of shape (N,) + shape(z)
    """
    z = np.asarray(z, dtype=complex)
    real = z.imag == 0
    values = np.zeros((basis.size,) + z.shape, dtype=complex)
    if np.any(real):
        values[:, real] = _real_eps_all(basis, z.real[real])
    if np.any(~real):
        zc = z[~real]
        values[:, ~real] = 1j * np.sign(zc.imag) * basis.weighted_all(np.conj(zc))
    return values


def eps_transform(basis: SkewBasis, n: int, z):
    """
    eps(phi pi_n) at a real or complex argument.

    Args:
        basis: Skew basis
        n: Index 0 <= n < N
        z: Scalar or array

    Returns:
        Value(s); real for real arguments
    """
    basis._check_index(n)
    values = eps_all(basis, z)[n]
    if not np.any(np.asarray(z, dtype=complex).imag):
        values = values.real
    return values[()] if np.ndim(z) == 0 else values


def eps_transform_numeric(
    basis: SkewBasis, n: int, x: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """
    eps(phi pi_n)(x) by direct quadrature of (1/2) int phi pi_n(t) sgn(t - x) dt.

    Used as an independent check of the closed forms.
    """
    basis._check_index(n)
    spec = spec or QuadratureSpec(tol=1e-12)
    if np.imag(x) != 0:
        raise DomainError("The numeric eps transform takes real arguments")
    x = float(np.real(x))

    def f(t: np.ndarray) -> np.ndarray:
        return basis.weighted_all(t)[n].real

    breaks = sorted({-2.0, 2.0, x})
    total_right = quadrature.integrate_semiinfinite(f, breaks[-1], 1, spec)
    total_left = quadrature.integrate_semiinfinite(f, breaks[0], -1, spec)
    above = total_right
    below = total_left
    right_panels = [b for b in breaks if b >= x]
    left_panels = [b for b in breaks if b <= x]
    if len(right_panels) > 1:
        above = above + quadrature.integrate_panels(f, right_panels, spec)
    if len(left_panels) > 1:
        below = below + quadrature.integrate_panels(f, left_panels, spec)
    return float(0.5 * (above - below))


def _pairs(values: np.ndarray):
    return values[0::2], values[1::2]


def orto_kernel(basis: SkewBasis, z, w):
    """
    Orto-kernel of the real ensemble,

    kappa_N(z, w) = 2 phi(z) phi(w) sum_j (pi_2j(z) pi_2j+1(w) - pi_2j(w) pi_2j+1(z)).

    Args:
        basis: Skew basis of an even-N real ensemble
        z, w: Scalars or broadcastable arrays

    Returns:
        Antisymmetric value(s)
    """
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )
    ez, oz = _pairs(basis.weighted_all(z))
    ew, ow = _pairs(basis.weighted_all(w))
    value = 2.0 * np.sum(ez * ow - ew * oz, axis=0)
    return _real_if_possible(value, z, w)


def _real_if_possible(value: np.ndarray, z: np.ndarray, w: np.ndarray):
    if not np.any(z.imag) and not np.any(w.imag):
        value = value.real
    return value[()] if value.ndim == 0 else value


def _sgn(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    both_real = (z.imag == 0) & (w.imag == 0)
    d = z.real - w.real
    sign = np.where(np.abs(d) <= SIGN_TOLERANCE, 0.0, np.sign(d))
    return np.where(both_real, sign, 0.0)


def kappa_eps(basis: SkewBasis, z, w):
    """
    kappa eps(z, w) = 2 phi(z) sum_j (pi_2j(z) E_2j+1(w) - E_2j(w) pi_2j+1(z))

    with E_m = eps(phi pi_m).
    """
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )
    ez, oz = _pairs(basis.weighted_all(z))
    eps_e, eps_o = _pairs(eps_all(basis, w))
    value = 2.0 * np.sum(ez * eps_o - eps_e * oz, axis=0)
    return _real_if_possible(value, z, w)


def eps_kappa_eps(basis: SkewBasis, z, w):
    """eps kappa eps(z, w) without the sign term"""
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )
    ze, zo = _pairs(eps_all(basis, z))
    we, wo = _pairs(eps_all(basis, w))
    value = 2.0 * np.sum(ze * wo - we * zo, axis=0)
    return _real_if_possible(value, z, w)


def kappa_tilde(basis: SkewBasis, z, w):
    """Weight-stripped orto-kernel kappa(z, w) / (phi(z) phi(w))"""
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )
    ez, oz = _pairs(basis.evaluate_all(z))
    ew, ow = _pairs(basis.evaluate_all(w))
    value = 2.0 * np.sum(ez * ow - ew * oz, axis=0)
    return _real_if_possible(value, z, w)


def kappa_eps_tilde(basis: SkewBasis, z, y):
    """kappa eps(z, y) / phi(z) for real y"""
    z, y = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(y, dtype=complex)
    )
    if np.any(y.imag):
        raise DomainError("The weight-stripped kappa eps takes a real second argument")
    ez, oz = _pairs(basis.evaluate_all(z))
    eps_e, eps_o = _pairs(eps_all(basis, y))
    value = 2.0 * np.sum(ez * eps_o - eps_e * oz, axis=0)
    return _real_if_possible(value, z, y)


def exterior_rescaled_real(basis: SkewBasis, z, w):
    """
    Exterior rescaling |Phi(z)Phi(w)|^s / (Phi(z)Phi(w))^N kappa(z, w) / (s - N).

    The factors |Phi|^s are folded into the weighted table in log form.
    """
    params = basis.params
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )

    def lifted(x: np.ndarray) -> np.ndarray:
        phi = np.asarray(specfun.joukowski_phi(x))
        factor = np.exp(params.s * specfun.joukowski_log_modulus(x)) / phi**params.n
        return basis.weighted_all(x) * factor

    ez, oz = _pairs(lifted(z))
    ew, ow = _pairs(lifted(w))
    value = 2.0 * np.sum(ez * ow - ew * oz, axis=0) / params.c_eff
    return value[()] if value.ndim == 0 else value


def matrix_kernel(basis: SkewBasis, z, w) -> MatrixKernelValue:
    """
    The 2 x 2 matrix kernel at a pair of points.

    Args:
        basis: Skew basis
        z: First point (real or complex)
        w: Second point (real or complex)

    Returns:
        MatrixKernelValue; the half sign term is added only for two real points
    """
    z = complex(z)
    w = complex(w)
    za, wa = np.asarray(z), np.asarray(w)
    return MatrixKernelValue(
        kappa=orto_kernel(basis, z, w),
        kappa_eps=kappa_eps(basis, z, w),
        eps_kappa=-kappa_eps(basis, w, z),
        eps_kappa_eps_plus_sgn=eps_kappa_eps(basis, z, w) + 0.5 * float(_sgn(za, wa)),
    )


def correlation_rlm(
    basis: SkewBasis, xs: Sequence[float], zs: Sequence[complex] = ()
) -> float:
    """
    Correlation function R_{l,m} of l real points and m upper half-plane points.

    The Pfaffian of the 2(l + m) skew matrix whose (i, j) block is the
    matrix kernel at the i-th and j-th point (reals first).

    Args:
        basis: Skew basis
        xs: Real points
        zs: Points in the open upper half-plane

    Returns:
        Real, nonnegative value
    """
    xs = [float(x) for x in xs]
    zs = [complex(z) for z in zs]
    if any(z.imag <= 0 for z in zs):
        raise DomainError("Complex points must lie in the open upper half-plane")
    points = [complex(x) for x in xs] + zs
    size = 2 * len(points)
    if size == 0:
        return 1.0
    matrix = np.zeros((size, size), dtype=complex)
    for i, p in enumerate(points):
        for j, q in enumerate(points):
            if j < i:
                continue
            block = matrix_kernel(basis, p, q).as_block()
            matrix[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = block
            matrix[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] = -block.T
    # diagonal blocks are exactly skew
    for i in range(len(points)):
        matrix[2 * i, 2 * i] = matrix[2 * i + 1, 2 * i + 1] = 0.0
        matrix[2 * i + 1, 2 * i] = -matrix[2 * i, 2 * i + 1]
    value = float(np.real(pfaffian(SkewMatrix(matrix, check=False))))
    if value < CORRELATION_FLOOR:
        logger.warning(
            f"Negative Pfaffian correlation {value:.3e} beyond the numerical floor"
        )
    return max(value, 0.0)


def real_density(basis: SkewBasis, x):
    """Density of real roots R_{1,0}(x) = kappa eps(x, x), vectorized"""
    x = np.asarray(x, dtype=float)
    return kappa_eps(basis, x, x)


def complex_pair_density(basis: SkewBasis, z):
    """
    Density of complex roots R_{0,1}(z) = kappa eps(z, z), vectorized.

    Equals -4 phi(z)^2 sum_j Im(pi_2j(z) conj(pi_2j+1(z))) for Im z > 0.
    """
    z = np.asarray(z, dtype=complex)
    e, o = _pairs(basis.weighted_all(z))
    value = -4.0 * np.sum((e * np.conj(o)).imag, axis=0) * np.sign(z.imag)
    return value[()] if value.ndim == 0 else value


def expected_real_in(params: EnsembleParams) -> float:
    """Expected number of real roots in [-2, 2], N (1 - (N+1)(2N+1)/(6 s^2))"""
    n, s = params.n, params.s
    return n * (1.0 - (n + 1) * (2 * n + 1) / (6.0 * s * s))


def expected_real_in_quadrature(basis: SkewBasis, spec: QuadratureSpec) -> float:
    """Integral of R_{1,0} over [-2, 2]"""
    return float(
        quadrature.integrate_panels(
            lambda x: real_density(basis, x), [-2.0, 0.0, 2.0], spec
        )
    )


def expected_real_out(
    params: EnsembleParams,
    spec: QuadratureSpec,
    basis: Optional[SkewBasis] = None,
) -> float:
    """
    Expected number of real roots outside (-2, 2).

    Twice the integral of R_{1,0} over (2, inf), using the evenness of the
    density; the integrand decays like x^(-2(s - N) - 2).
    """
    basis = basis or SkewBasis(params)
    value = quadrature.integrate_semiinfinite(
        lambda x: real_density(basis, x), 2.0, 1, spec, decay=2 * params.c_eff + 2
    )
    return 2.0 * float(value)


def expected_complex_pairs(basis: SkewBasis, spec: QuadratureSpec) -> float:
    """Expected number of roots in the open upper half-plane"""
    return float(
        quadrature.integrate_halfplane(lambda z: complex_pair_density(basis, z), spec)
    )


@dataclass_json
@dataclass
class ExpectedCounts:
    """Expected root counts of a real ensemble"""

    n: int
    s: float
    e_in: float
    e_in_quadrature: float
    e_out: float
    complex_pairs: float
    total: float
    eout_log_ratio: float


def expected_counts(params: EnsembleParams, spec: QuadratureSpec) -> ExpectedCounts:
    """
    All expected counts of a real ensemble.

    Args:
        params: Real ensemble parameters
        spec: Quadrature settings

    Returns:
        ExpectedCounts, with total = E_in + E_out + 2 E_pairs (which is N) and
        the ratio of E_out to -log(1 - N/s)
    """
    basis = SkewBasis(params)
    e_in = expected_real_in(params)
    e_in_q = expected_real_in_quadrature(basis, spec)
    e_out = expected_real_out(params, spec, basis)
    pairs = expected_complex_pairs(basis, spec)
    total = e_in_q + e_out + 2.0 * pairs
    ratio = e_out / -math.log(1.0 - params.lambda_eff)
    logger.info(
        f"Expected counts N={params.n} s={params.s}: in={e_in:.10g} out={e_out:.10g} "
        f"pairs={pairs:.10g} total={total:.10g}"
    )
    return ExpectedCounts(
        n=params.n,
        s=params.s,
        e_in=e_in,
        e_in_quadrature=e_in_q,
        e_out=e_out,
        complex_pairs=pairs,
        total=total,
        eout_log_ratio=ratio,
    )


def density_grid_real(
    basis: SkewBasis, points: np.ndarray, line: bool = False
) -> np.ndarray:
    """
    Real-ensemble densities on lattice points.

    Args:
        basis: Skew basis
        points: Complex lattice points
        line: Evaluate R_{1,0} at the real part of each point instead of R_{0,1}

    Returns:
        Real array with the shape of points; R_{0,1} vanishes on the real axis
    """
    z = np.asarray(points, dtype=complex)
    if line:
        return np.asarray(real_density(basis, z.real), dtype=float)
    return np.asarray(complex_pair_density(basis, z), dtype=float)
