"""
Complex Ensemble Kernel

This module implements the determinantal kernel of the complex reciprocal
Mahler ensemble,

    K(z, w) = phi(z) phi(w) sum_{n<N} (s^2 - (n+1)^2)/(2 pi s) U_n(z) conj(U_n(w)),

its correlation functions, density grids and expected counts over regions.
The weight product and the polynomial sum are kept apart; evaluations that
must survive large |z| go through the Phi-scaled Chebyshev table.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.ensemble import EnsembleParams, Field, weight_phi
from ..core.geometry import GridSpec, Region
from ..numerics import specfun
from ..numerics.linalg import determinant
from ..numerics.quadrature import QuadratureSpec

logger = logging.getLogger("mahler_kernels.complex_kernel")

# Correlation functions below this are reported as zero
CORRELATION_FLOOR = -1e-10


@dataclass
class KernelEvaluation:
    """Kernel value split into weight product phi(z)phi(w) and polynomial sum"""

    value: complex
    weight_product: float
    reduced: complex


def kernel_coefficients(params: EnsembleParams) -> np.ndarray:
    """Coefficients (s^2 - (n+1)^2) / (2 pi s) for n < N"""
    k = np.arange(1, params.n + 1, dtype=float)
    return (params.s * params.s - k * k) / (2.0 * np.pi * params.s)


def _check_field(params: EnsembleParams) -> None:
    params.require(Field.COMPLEX)


def kernel_tilde(params: EnsembleParams, z, w):
    """
    Weight-stripped kernel sum_{n<N} c_n U_n(z) conj(U_n(w)).

    Args:
        params: Ensemble parameters
        z, w: Complex scalars or broadcastable arrays

    Returns:
        Complex value(s)
    """
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )
    coeffs = kernel_coefficients(params)
    uz = specfun.cheb_table("second", params.n - 1, z)
    uw = specfun.cheb_table("second", params.n - 1, w)
    value = np.tensordot(coeffs, uz * np.conj(uw), axes=1)
    return value[()] if value.ndim == 0 else value


def kernel_weighted(params: EnsembleParams, z, w):
    """
    Full kernel K(z, w) evaluated without forming U_n(z) or phi(z) separately.

    The products phi U_n come from the weighted Chebyshev table, which stays
    finite for any |z|.
    """
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )
    coeffs = kernel_coefficients(params)
    terms = _weighted_terms(params, z) * np.conj(_weighted_terms(params, w))
    return np.tensordot(coeffs, terms, axes=1)[()]


def _weighted_terms(params: EnsembleParams, z: np.ndarray) -> np.ndarray:
    """Table of phi(z) U_n(z) for n < N, shape (N,) + z.shape"""
    return specfun.cheb_weighted_table(params.n - 1, params.s, z)


def kernel_k(params: EnsembleParams, z, w) -> KernelEvaluation:
    """
    Evaluate the determinantal kernel at a pair of points.

    Args:
        params: Complex ensemble parameters
        z: First point
        w: Second point

    Returns:
        KernelEvaluation with value = weight_product * reduced
    """
    _check_field(params)
    reduced = kernel_tilde(params, z, w)
    weights = weight_phi(params, z) * weight_phi(params, w)
    return KernelEvaluation(
        value=weights * reduced, weight_product=weights, reduced=reduced
    )


def density(params: EnsembleParams, z):
    """One-point intensity R_1(z) = K(z, z), vectorized and real"""
    z = np.asarray(z, dtype=complex)
    coeffs = kernel_coefficients(params)
    terms = _weighted_terms(params, z)
    value = np.tensordot(coeffs, (terms * np.conj(terms)).real, axes=1)
    return value[()] if value.ndim == 0 else value


def kernel_matrix(params: EnsembleParams, points: Sequence[complex]) -> np.ndarray:
    """Matrix [K(z_j, z_k)] over a point tuple"""
    _check_field(params)
    z = np.asarray(points, dtype=complex)
    return kernel_weighted(params, z[:, None], z[None, :])


def correlation_rn(params: EnsembleParams, points: Sequence[complex]) -> float:
    """
    n-point correlation function R_n = det[K(z_j, z_k)].

    Args:
        params: Complex ensemble parameters
        points: 1 <= n <= N points

    Returns:
        Real, nonnegative value (values above CORRELATION_FLOOR are clipped to 0)
    """
    matrix = kernel_matrix(params, points)
    value = float(np.real(determinant(matrix)))
    if value < CORRELATION_FLOOR:
        logger.warning(f"Negative correlation {value:.3e} beyond the numerical floor")
    return max(value, 0.0)


def kernel_gram_min_eigenvalue(
    params: EnsembleParams, points: Sequence[complex]
) -> float:
    """Smallest eigenvalue of the Hermitian kernel matrix over the points"""
    matrix = kernel_matrix(params, points)
    hermitian = 0.5 * (matrix + matrix.conj().T)
    return float(np.linalg.eigvalsh(hermitian)[0])


def expected_count_complex(
    params: EnsembleParams, region: Region, spec: QuadratureSpec
) -> float:
    """
    Expected number of points in a region, the integral of R_1 over it.

    Args:
        params: Complex ensemble parameters
        region: Disk, Annulus, Rectangle or WholePlane
        spec: Quadrature settings

    Returns:
        The expected count; N for the whole plane
    """
    _check_field(params)
    if region.is_empty:
        return 0.0
    value = float(np.real(region.integrate(lambda z: density(params, z), spec)))
    logger.debug(f"Expected count over {region.describe()}: {value:.12g}")
    return value


def density_grid(
    params: EnsembleParams, grid: GridSpec, weighted: bool = True
) -> np.ndarray:
    """
    Kernel diagonal on a lattice, row-major with y outer and x inner.

    Args:
        params: Complex ensemble parameters
        grid: Lattice
        weighted: R_1 = K(z, z) when True, the weight-stripped sum otherwise

    Returns:
        Real array of length nx * ny
    """
    _check_field(params)
    z = grid.points()
    if weighted:
        return np.asarray(density(params, z), dtype=float)
    return np.real(np.asarray(kernel_tilde(params, z, z)))


def exterior_rescaled(params: EnsembleParams, z, w):
    """
    Exterior rescaling |Phi(z)Phi(w)|^s / (Phi(z) conj Phi(w))^N K(z, w) / (s - N).

    Computed as sum c_n V_n(z) conj V_n(w) (Phi(z) conj Phi(w))^(n - N) / (s - N),
    which never forms Phi^N.
    """
    z, w = np.broadcast_arrays(
        np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    )
    coeffs = kernel_coefficients(params)
    vz = specfun.cheb_scaled_table(params.n - 1, z)
    vw = specfun.cheb_scaled_table(params.n - 1, w)
    product = np.asarray(specfun.joukowski_phi(z)) * np.conj(specfun.joukowski_phi(w))
    powers = product[None, ...] ** (np.arange(params.n) - params.n).reshape(
        (-1,) + (1,) * z.ndim
    )
    value = np.tensordot(coeffs, vz * np.conj(vw) * powers, axes=1) / params.c_eff
    return value[()] if value.ndim == 0 else value
