"""
Mahler Kernels Kernel Package

Finite-N kernels of both ensembles and their scaling limits.

This package contains:
- complex_kernel: Determinantal kernel, correlation functions and expected counts
- skew_system: Skew-orthogonal polynomials, skew-moments and sum identities
- real_kernel: eps transforms, the Pfaffian matrix kernel and real-root counts
- limits: Exterior, bulk and edge limits and the convergence harness
"""

from .complex_kernel import correlation_rn, density, expected_count_complex, kernel_k
from .limits import (
    ConvergenceRow,
    KernelKind,
    LimitParams,
    Regime,
    ScalingFrame,
    Target,
    converge,
    limit_bulk,
    limit_density,
    limit_edge,
)
from .real_kernel import (
    ExpectedCounts,
    correlation_rlm,
    expected_counts,
    expected_real_in,
    matrix_kernel,
)
from .skew_system import (
    Perturbation,
    SkewBasis,
    skew_inner,
    skew_moment_exact,
    skew_poly,
)

__all__ = [
    # Complex ensemble
    "kernel_k",
    "density",
    "correlation_rn",
    "expected_count_complex",
    # Skew-orthogonal system
    "SkewBasis",
    "Perturbation",
    "skew_poly",
    "skew_inner",
    "skew_moment_exact",
    # Real ensemble
    "matrix_kernel",
    "correlation_rlm",
    "expected_real_in",
    "expected_counts",
    "ExpectedCounts",
    # Limits
    "LimitParams",
    "ScalingFrame",
    "Regime",
    "KernelKind",
    "Target",
    "ConvergenceRow",
    "limit_bulk",
    "limit_edge",
    "limit_density",
    "converge",
]
