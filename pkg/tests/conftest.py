"""Shared fixtures for the mahler_kernels test suite"""

import numpy as np
import pytest

from mahler_kernels.core.ensemble import EnsembleParams, Field
from mahler_kernels.kernels.skew_system import SkewBasis
from mahler_kernels.numerics.quadrature import QuadratureSpec


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def spec():
    return QuadratureSpec(tol=1e-10)


@pytest.fixture
def loose_spec():
    return QuadratureSpec(tol=1e-8)


@pytest.fixture
def complex_params():
    return EnsembleParams(n=4, s=8.0, field=Field.COMPLEX)


@pytest.fixture
def real_params():
    return EnsembleParams(n=2, s=10.0, field=Field.REAL)


@pytest.fixture
def real_basis(real_params):
    return SkewBasis(real_params)


@pytest.fixture
def basis_8_12():
    return SkewBasis(EnsembleParams(n=8, s=12.0, field=Field.REAL))


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    monkeypatch.setenv("MAHLER_KERNELS_THREADS", "1")
