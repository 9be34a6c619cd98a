"""
Mahler Kernels - Reciprocal Mahler Ensembles

Finite-N kernels, correlation functions and scaling limits of the random
point processes formed by the roots of polynomials drawn uniformly from a
reciprocal Mahler starbody, for complex and real coefficients.

Key Components:
- Weight, equilibrium potential and (reciprocal) Mahler measures
- Determinantal kernel of the complex ensemble
- Skew-orthogonal polynomials and the Pfaffian matrix kernel of the real ensemble
- Exterior, bulk and edge scaling limits with a convergence harness
- Exact expected numbers of real roots
- Exact starbody sampler and a Metropolis cross-check
- CLI for grids, counts, verification, convergence tables and sampling

Usage:
    For programmatic use:
        from mahler_kernels import EnsembleParams, Field
        from mahler_kernels.kernels.real_kernel import expected_real_in

    For CLI usage:
        mahler-kernels expected --n 2 --s 10 --field real
        mahler-kernels verify
"""

# Version information
__version__ = "1.0.0"
__author__ = "Argo Nickerson"
__email__ = "argo@envopen.org"
__license__ = "LGPL v2.1"

# Core imports for convenience
from .core.ensemble import EnsembleParams, Field, PolynomialCoeffs, mahler, mahler_rec
from .core.errors import (
    ConvergenceError,
    DegeneratePolynomialError,
    DomainError,
    MahlerKernelsError,
    ValidationError,
    VerificationError,
)
from .core.geometry import GridSpec, parse_region
from .kernels.limits import KernelKind, LimitParams, Regime, ScalingFrame
from .kernels.skew_system import SkewBasis
from .numerics.quadrature import DEFAULT_TOLERANCE, QuadratureSpec
from .sampling.starbody import PolynomialSample, sample_starbody
from .utils.output import FORMAT_VERSION
from .utils.workers import THREADS_ENV_VAR

# Package metadata
__all__ = [
    # Version info
    "__version__",
    "__author__",
    "__email__",
    "__license__",
    # Core classes
    "EnsembleParams",
    "Field",
    "PolynomialCoeffs",
    "GridSpec",
    "QuadratureSpec",
    "SkewBasis",
    "LimitParams",
    "ScalingFrame",
    "Regime",
    "KernelKind",
    "PolynomialSample",
    # Functions
    "mahler",
    "mahler_rec",
    "parse_region",
    "sample_starbody",
    # Errors
    "MahlerKernelsError",
    "ValidationError",
    "DomainError",
    "DegeneratePolynomialError",
    "ConvergenceError",
    "VerificationError",
    # Constants
    "DEFAULT_TOLERANCE",
    "FORMAT_VERSION",
    "THREADS_ENV_VAR",
]
