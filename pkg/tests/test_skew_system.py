"""Tests for the skew-orthogonal system"""

import math

import numpy as np
import pytest

from mahler_kernels.core.ensemble import EnsembleParams, Field, PolynomialCoeffs
from mahler_kernels.core.errors import DomainError, ValidationError
from mahler_kernels.kernels import skew_system
from mahler_kernels.kernels.skew_system import Perturbation, SkewBasis


def canonical_form(n):
    form = np.zeros((n, n))
    for k in range(n // 2):
        form[2 * k, 2 * k + 1] = 1.0
        form[2 * k + 1, 2 * k] = -1.0
    return form


class TestBasis:
    def test_low_degrees(self, real_basis):
        assert skew_system.skew_poly(real_basis, 0, 1.3) == pytest.approx(3.0 / 16.0)
        # pi_1(x) = (1 - 4/s^2) x / 2
        assert skew_system.skew_poly(real_basis, 1, 1.5) == pytest.approx(0.48 * 1.5)

    def test_representations_agree(self, basis_8_12, rng):
        z = rng.uniform(-2.5, 2.5, 40) + 1j * rng.uniform(-1.0, 1.0, 40)
        np.testing.assert_allclose(
            basis_8_12.evaluate_all(z),
            basis_8_12.evaluate_expansion_all(z),
            rtol=1e-10,
            atol=1e-12,
        )
        assert skew_system.skew_poly(basis_8_12, 5, z[0], "expansion") == pytest.approx(
            skew_system.skew_poly(basis_8_12, 5, z[0])
        )

    def test_unknown_representation(self, real_basis):
        with pytest.raises(ValidationError):
            skew_system.skew_poly(real_basis, 0, 0.0, "taylor")

    def test_index_range(self, real_basis):
        with pytest.raises(DomainError):
            skew_system.skew_poly(real_basis, 2, 0.0)

    def test_needs_real_field(self, complex_params):
        with pytest.raises(ValidationError):
            SkewBasis(complex_params)

    def test_perturbation(self, real_params):
        basis = SkewBasis(real_params, Perturbation(index=1, delta=1e-3))
        plain = SkewBasis(real_params)
        assert basis.u_table[1, 1] - plain.u_table[1, 1] == pytest.approx(1e-3)
        x = np.linspace(-1.0, 1.0, 5)
        np.testing.assert_allclose(
            basis.evaluate_all(x), basis.evaluate_expansion_all(x), atol=1e-14
        )
        with pytest.raises(DomainError):
            SkewBasis(real_params, Perturbation(index=2, delta=1e-3))

    def test_monomial_to_u(self):
        np.testing.assert_allclose(
            skew_system.monomial_to_u([0.0, 0.0, 1.0]), [1.0, 0.0, 1.0]
        )
        np.testing.assert_allclose(skew_system.monomial_to_u([2.0, 1.0]), [2.0, 1.0])


class TestSkewMoments:
    def test_closed_form(self):
        params = EnsembleParams(2, 10.0, Field.REAL)
        assert skew_system.skew_moment_exact(params, 1, 2) == pytest.approx(100.0 / 9.0)
        moment = skew_system.skew_moment_exact(params, 2, 1)
        assert moment == pytest.approx(-100.0 / 9.0)
        assert skew_system.skew_moment_exact(params, 1, 3) == 0.0

    def test_divergent(self):
        params = EnsembleParams(2, 3.0, Field.REAL)
        with pytest.raises(DomainError):
            skew_system.skew_moment_exact(params, 1, 4)

    def test_quadrature_matches_closed_form(self, loose_spec):
        params = EnsembleParams(2, 10.0, Field.REAL)
        gram = skew_system.skew_u_gram(params, 3, loose_spec)
        for m in range(1, 5):
            for n in range(1, 5):
                exact = skew_system.skew_moment_exact(params, m, n)
                tolerance = 1e-6 * max(1.0, abs(exact))
                assert gram[m - 1, n - 1] == pytest.approx(exact, abs=tolerance)

    def test_inner_product(self, loose_spec):
        params = EnsembleParams(2, 10.0, Field.REAL)
        forward = skew_system.skew_inner(
            params, [1.0], PolynomialCoeffs([0.0, 1.0]), loose_spec
        )
        backward = skew_system.skew_inner(params, [0.0, 1.0], [1.0], loose_spec)
        assert forward == pytest.approx(100.0 / 9.0, rel=1e-6)
        assert backward == pytest.approx(-forward, rel=1e-12)

    def test_inner_product_divergent(self, spec):
        params = EnsembleParams(2, 3.0, Field.REAL)
        with pytest.raises(DomainError):
            skew_system.skew_inner(params, [0.0, 0.0, 1.0], [1.0], spec)

    def test_inner_product_needs_real_coefficients(self, real_params, spec):
        with pytest.raises(DomainError):
            skew_system.skew_inner(real_params, [1j], [1.0], spec)


class TestOrthonormality:
    def test_exact(self, basis_8_12):
        gram = skew_system.skew_gram(basis_8_12, exact=True)
        np.testing.assert_allclose(gram, canonical_form(8), atol=1e-9)

    def test_quadrature(self, real_basis, loose_spec):
        gram = skew_system.skew_gram(real_basis, loose_spec)
        np.testing.assert_allclose(gram, canonical_form(2), atol=1e-6)

    def test_perturbation_breaks_it(self, real_params):
        basis = SkewBasis(real_params, Perturbation(index=1, delta=1e-3))
        gram = skew_system.skew_gram(basis, exact=True)
        assert np.max(np.abs(gram - canonical_form(2))) > 1e-4

    def test_spec_required(self, real_basis):
        with pytest.raises(ValidationError):
            skew_system.skew_gram(real_basis)


class TestSumIdentities:
    def test_totals(self):
        even = skew_system.sum_identities(3, 0.3).checks[2]
        odd = skew_system.sum_identities(2, 0.3).checks[3]
        assert even.lhs == pytest.approx(math.pi / 2.0, rel=1e-13)
        assert odd.lhs == pytest.approx(-2.0 * math.pi, rel=1e-13)

    @pytest.mark.parametrize("n", range(6))
    @pytest.mark.parametrize("a", [0.3, 1.0, 2.7])
    def test_pole_sums(self, n, a):
        report = skew_system.sum_identities(n, a)
        for check in report.checks:
            assert abs(check.residual) <= 1e-12 * max(1.0, abs(check.rhs))

    def test_pole_rejected(self):
        with pytest.raises(DomainError):
            skew_system.sum_identities(2, 0.5)


class TestConstants:
    def test_gamma(self):
        params = EnsembleParams(2, 10.0, Field.REAL)
        assert skew_system.gamma_n_s(params, 0) == pytest.approx(75.0 / 99.0, rel=1e-13)

    def test_gamma_index(self, real_params):
        with pytest.raises(DomainError):
            skew_system.gamma_n_s(real_params, 1)

    def test_half_line_moment(self, real_params):
        assert skew_system.half_line_odd_moment(real_params, 0) == pytest.approx(0.98)

    @pytest.mark.parametrize("s", [9.0, 12.0, 30.5])
    def test_delta_vanishes(self, s):
        params = EnsembleParams(8, s, Field.REAL)
        for k in range(4):
            assert skew_system.delta_n_s(params, k) == pytest.approx(0.0, abs=1e-12)


class TestAntiderivatives:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_continuous_at_two(self, m):
        below = skew_system.u_antiderivative(10.0, m, 2.0 - 1e-12)
        above = skew_system.u_antiderivative(10.0, m, 2.0 + 1e-12)
        assert below == pytest.approx(above, abs=1e-9)

    @pytest.mark.parametrize("m", [1, 2, 5])
    @pytest.mark.parametrize("x", [-2.5, 1.5, 3.0])
    def test_against_quadrature(self, m, x, spec):
        assert abs(skew_system.antiderivative_residual(10.0, m, x, spec)) < 1e-8

    def test_limit(self):
        assert skew_system.u_antiderivative(10.0, 2, 1e8) == pytest.approx(
            skew_system.u_antiderivative_limit(10.0, 2), rel=1e-12
        )

    def test_domain(self):
        with pytest.raises(DomainError):
            skew_system.u_antiderivative(3.0, 3, 0.0)
