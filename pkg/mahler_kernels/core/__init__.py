"""
Mahler Kernels Core Package

Shared types of the ensemble computations.

This package contains:
- errors: Exception hierarchy and CLI exit codes
- ensemble: Ensemble parameters, weight, potential and Mahler measures
- geometry: Regions, region parsing and density-grid lattices
"""

from .ensemble import (
    DISK_GUARD,
    INTERVAL_GUARD,
    EnsembleParams,
    Field,
    PolynomialCoeffs,
    mahler,
    mahler_rec,
    potential_v,
    weight_phi,
)
from .errors import (
    EXIT_NON_CONVERGENCE,
    EXIT_OK,
    EXIT_VALIDATION,
    EXIT_VERIFICATION,
    ConvergenceError,
    DegeneratePolynomialError,
    DomainError,
    MahlerKernelsError,
    ValidationError,
    VerificationError,
)
from .geometry import (
    Annulus,
    Disk,
    GridSpec,
    RealInterval,
    Rectangle,
    Region,
    WholePlane,
    parse_region,
)

__all__ = [
    # Ensemble
    "EnsembleParams",
    "Field",
    "PolynomialCoeffs",
    "weight_phi",
    "potential_v",
    "mahler",
    "mahler_rec",
    # Geometry
    "Region",
    "Disk",
    "Annulus",
    "Rectangle",
    "WholePlane",
    "RealInterval",
    "GridSpec",
    "parse_region",
    # Errors
    "MahlerKernelsError",
    "ValidationError",
    "DomainError",
    "DegeneratePolynomialError",
    "ConvergenceError",
    "VerificationError",
    # Constants
    "DISK_GUARD",
    "INTERVAL_GUARD",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "EXIT_NON_CONVERGENCE",
    "EXIT_VERIFICATION",
]
