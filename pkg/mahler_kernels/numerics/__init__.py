"""
Mahler Kernels Numerics Package

Special functions, dense linear algebra and quadrature.

This package contains:
- specfun: Exterior map, Chebyshev, Gegenbauer and Bessel functions, Gamma ratios
- linalg: Pfaffian, determinant and polynomial roots with conjugate pairing
- quadrature: Tanh-sinh and Gauss-Legendre rules on intervals, half-lines,
  boxes and the upper half-plane, refined to a tolerance

Every routine is vectorized over its point arguments and deterministic:
the node sets and summation order depend only on the refinement level.
"""

from .linalg import SkewMatrix, determinant, pair_conjugates, pfaffian, poly_roots
from .quadrature import (
    DEFAULT_TOLERANCE,
    GAUSS_LEGENDRE,
    TANH_SINH,
    QuadratureSpec,
    integrate_halfplane,
    integrate_interval,
    integrate_semiinfinite,
)

__all__ = [
    # Linear algebra
    "SkewMatrix",
    "pfaffian",
    "determinant",
    "poly_roots",
    "pair_conjugates",
    # Quadrature
    "QuadratureSpec",
    "integrate_interval",
    "integrate_semiinfinite",
    "integrate_halfplane",
    # Constants
    "DEFAULT_TOLERANCE",
    "TANH_SINH",
    "GAUSS_LEGENDRE",
]
