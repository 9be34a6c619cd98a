"""
Mahler Kernels Sampling Package

This package contains:
- starbody: Exact uniform sampling from the reciprocal Mahler starbody and
  empirical root statistics
- mcmc: Metropolis chain on point configurations of the complex ensemble
"""

from .mcmc import MCMCResult, mcmc_complex
from .starbody import (
    PolynomialSample,
    RootsReport,
    SamplerStats,
    gauge,
    roots_statistics,
    sample_starbody,
)

__all__ = [
    # Starbody sampler
    "PolynomialSample",
    "SamplerStats",
    "RootsReport",
    "sample_starbody",
    "roots_statistics",
    "gauge",
    # MCMC
    "MCMCResult",
    "mcmc_complex",
]
