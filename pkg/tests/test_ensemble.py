"""Tests for ensemble parameters, the weight and Mahler measures"""

import math

import numpy as np
import pytest

from mahler_kernels.core.ensemble import (
    EnsembleParams,
    Field,
    PolynomialCoeffs,
    mahler,
    mahler_rec,
    potential_v,
    weight_phi,
)
from mahler_kernels.core.errors import (
    DegeneratePolynomialError,
    DomainError,
    ValidationError,
)


class TestEnsembleParams:
    def test_field_from_string(self):
        params = EnsembleParams(n=2, s=10.0, field="real")
        assert params.field is Field.REAL
        assert params.is_real

    def test_surrogates(self):
        params = EnsembleParams(n=4, s=10.0)
        assert params.lambda_eff == pytest.approx(0.4)
        assert params.c_eff == pytest.approx(6.0)
        assert params.sampler_lambda == pytest.approx(0.5)

    @pytest.mark.parametrize(
        "n, s, field",
        [
            (0, 3.0, "complex"),
            (3, 3.0, "complex"),
            (3, 2.0, "complex"),
            (3, 6.0, "real"),
        ],
    )
    def test_invalid(self, n, s, field):
        with pytest.raises(ValidationError):
            EnsembleParams(n=n, s=s, field=field)

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            EnsembleParams(n=2, s=4.0, field="quaternion")

    def test_infinite_s_rejected(self):
        with pytest.raises(ValidationError):
            EnsembleParams(n=2, s=math.inf)

    def test_hashable_and_serializable(self):
        params = EnsembleParams(n=2, s=10.0, field=Field.REAL)
        assert hash(params) == hash(EnsembleParams(n=2, s=10.0, field=Field.REAL))
        restored = EnsembleParams.from_json(params.to_json())
        assert restored == params

    def test_require(self):
        with pytest.raises(ValidationError):
            EnsembleParams(n=2, s=10.0).require(Field.REAL)


class TestWeight:
    def test_weight_on_interval(self):
        params = EnsembleParams(n=2, s=10.0)
        assert weight_phi(params, 0.7) == pytest.approx(1.0)

    def test_weight_outside(self):
        params = EnsembleParams(n=2, s=10.0)
        assert weight_phi(params, 2.5) == pytest.approx(2.0**-10)
        assert potential_v(params, 2.5) == pytest.approx(10.0 * math.log(2.0))

    def test_potential_vanishes_on_interval(self):
        params = EnsembleParams(n=2, s=10.0)
        x = np.linspace(-2, 2, 9)
        np.testing.assert_allclose(potential_v(params, x), 0.0, atol=1e-12)

    def test_weight_is_exp_of_potential(self, rng):
        params = EnsembleParams(n=3, s=7.5)
        z = rng.normal(scale=3.0, size=100) + 1j * rng.normal(scale=3.0, size=100)
        np.testing.assert_allclose(
            np.exp(-potential_v(params, z)), weight_phi(params, z)
        )


class TestPolynomialCoeffs:
    def test_degenerate_leading(self):
        with pytest.raises(DegeneratePolynomialError):
            PolynomialCoeffs([1.0, 2.0, 0.0])

    def test_pairs(self):
        f = PolynomialCoeffs([1.0 + 2.0j, -3.0, 0.5j])
        assert PolynomialCoeffs.from_pairs(f.to_pairs()) == f

    def test_real_pairs_stay_real(self):
        f = PolynomialCoeffs.from_pairs([[1.0, 0.0], [2.0, 0.0]])
        assert f.is_real

    def test_reciprocal_expansion(self):
        f = PolynomialCoeffs([-3.0, 1.0])
        g = f.reciprocal_expansion()
        np.testing.assert_allclose(g.coeffs, [1.0, -3.0, 1.0])
        z = 0.4 + 0.9j
        assert g.evaluate(z) == pytest.approx(z * f.evaluate(z + 1.0 / z))


class TestMahler:
    def test_monomial(self):
        assert mahler_rec(1.0, [0.0, 1.0]) == pytest.approx(1.0)

    def test_linear(self):
        golden_square = (3.0 + math.sqrt(5.0)) / 2.0
        assert mahler_rec(1.0, [-3.0, 1.0]) == pytest.approx(golden_square)

    def test_disk_measure(self):
        assert mahler(1.0, [-3.0, 0.0, 2.0]) == pytest.approx(2.0 * 1.5)
        assert mahler(1.0, [1.0, 0.0, 1.0]) == pytest.approx(1.0)

    def test_homogeneity(self):
        f = np.array([0.3, -1.2, 0.7, 1.0])
        scaled = mahler_rec(0.5, 2.0 * f)
        assert scaled == pytest.approx(math.sqrt(2.0) * mahler_rec(0.5, f))
        assert mahler(0.5, 2.0 * f) == pytest.approx(math.sqrt(2.0) * mahler(0.5, f))

    def test_reciprocal_equals_disk_measure_of_expansion(self):
        f = PolynomialCoeffs([0.4, -2.5, 0.3, 1.5])
        expected = mahler(1.0, f.reciprocal_expansion())
        assert mahler_rec(1.0, f) == pytest.approx(expected, rel=1e-9)

    def test_negative_lambda(self):
        with pytest.raises(DomainError):
            mahler_rec(-1.0, [1.0, 1.0])
