"""Tests for the real ensemble matrix kernel"""

import math

import numpy as np
import pytest

from mahler_kernels.core.ensemble import EnsembleParams, Field
from mahler_kernels.core.errors import DomainError
from mahler_kernels.kernels import real_kernel
from mahler_kernels.kernels.skew_system import Perturbation, SkewBasis
from mahler_kernels.numerics import specfun


class TestEpsTransforms:
    def test_value_at_two(self, real_basis):
        value = real_kernel.eps_transform(real_basis, 0, 2.0)
        assert value == pytest.approx(-3.0 / 8.0)

    def test_odd_transform_at_zero(self, real_basis):
        assert real_kernel.eps_transform(real_basis, 1, 0.0) == pytest.approx(0.98)

    def test_even_index_gives_odd_function(self, basis_8_12):
        x = np.array([0.3, 1.7, 2.4, 5.0])
        for n in (0, 2, 4):
            np.testing.assert_allclose(
                real_kernel.eps_transform(basis_8_12, n, -x),
                -real_kernel.eps_transform(basis_8_12, n, x),
                atol=1e-13,
            )

    @pytest.mark.parametrize("x", [-3.5, -1.3, 0.5, 1.99, 2.7])
    def test_against_quadrature(self, real_basis, x, loose_spec):
        for n in range(2):
            assert real_kernel.eps_transform(real_basis, n, x) == pytest.approx(
                real_kernel.eps_transform_numeric(real_basis, n, x, loose_spec),
                abs=1e-7,
            )

    def test_continuous_at_junctions(self, basis_8_12):
        gap = 1e-9
        for edge in (-2.0, 2.0):
            inside = real_kernel.eps_all(basis_8_12, edge - np.sign(edge) * gap).real
            outside = real_kernel.eps_all(basis_8_12, edge + np.sign(edge) * gap).real
            np.testing.assert_allclose(inside, outside, atol=1e-6)

    def test_complex_branch(self, real_basis):
        z = 0.5 + 0.5j
        expected = 1j * real_basis.weighted_all(np.conj(z))
        np.testing.assert_allclose(real_kernel.eps_all(real_basis, z), expected)

    def test_perturbed_basis_stays_consistent(self, real_params, loose_spec):
        basis = SkewBasis(real_params, Perturbation(index=1, delta=1e-3))
        for x in (0.7, 3.0):
            assert real_kernel.eps_transform(basis, 1, x) == pytest.approx(
                real_kernel.eps_transform_numeric(basis, 1, x, loose_spec), abs=1e-7
            )

    def test_numeric_takes_real_arguments(self, real_basis):
        with pytest.raises(DomainError):
            real_kernel.eps_transform_numeric(real_basis, 0, 1.0 + 1.0j)


class TestOrtoKernel:
    def test_reference_value(self, real_basis):
        assert real_kernel.orto_kernel(real_basis, 0.0, 1.0) == pytest.approx(0.18)

    def test_antisymmetry(self, basis_8_12, rng):
        z, w = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert real_kernel.orto_kernel(basis_8_12, z, z) == 0.0
        assert real_kernel.orto_kernel(basis_8_12, z, w) == pytest.approx(
            -real_kernel.orto_kernel(basis_8_12, w, z)
        )
        assert real_kernel.orto_kernel(basis_8_12, -z, -w) == pytest.approx(
            -real_kernel.orto_kernel(basis_8_12, z, w)
        )

    def test_weight_stripped(self, basis_8_12):
        z, w = 2.5 + 0.5j, -3.0
        weights = np.exp(
            -basis_8_12.params.s
            * (specfun.joukowski_log_modulus(z) + specfun.joukowski_log_modulus(w))
        )
        assert real_kernel.kappa_tilde(basis_8_12, z, w) * weights == pytest.approx(
            real_kernel.orto_kernel(basis_8_12, z, w), rel=1e-10
        )

    def test_exterior_rescaled(self, real_basis):
        params = real_basis.params
        z, w = 3.0, 4.0
        pz, pw = specfun.joukowski_phi(z), specfun.joukowski_phi(w)
        kappa = real_kernel.orto_kernel(real_basis, z, w)
        direct = abs(pz * pw) ** params.s / (pz * pw) ** params.n * kappa / params.c_eff
        assert real_kernel.exterior_rescaled_real(real_basis, z, w) == pytest.approx(
            direct, rel=1e-10
        )


class TestMatrixKernel:
    def test_kappa_eps_at_origin(self, real_basis):
        assert real_kernel.kappa_eps(real_basis, 0.0, 0.0) == pytest.approx(0.3675)

    def test_entries(self, basis_8_12):
        z, w = 0.4 + 0.8j, -1.2
        value = real_kernel.matrix_kernel(basis_8_12, z, w)
        swapped = real_kernel.kappa_eps(basis_8_12, w, z)
        assert value.eps_kappa == pytest.approx(-swapped)
        assert value.as_block().shape == (2, 2)

    def test_sign_term_for_real_pairs(self, basis_8_12):
        value = real_kernel.matrix_kernel(basis_8_12, 1.0, 0.5)
        assert value.eps_kappa_eps_plus_sgn == pytest.approx(
            real_kernel.eps_kappa_eps(basis_8_12, 1.0, 0.5) + 0.5
        )

    def test_eps_kappa_eps_antisymmetric(self, basis_8_12, rng):
        x, y = rng.uniform(-4.0, 4.0, 2)
        assert real_kernel.eps_kappa_eps(basis_8_12, x, y) == pytest.approx(
            -real_kernel.eps_kappa_eps(basis_8_12, y, x), abs=1e-14
        )


class TestCorrelations:
    def test_one_real_point(self, basis_8_12):
        x = 0.7
        assert real_kernel.correlation_rlm(basis_8_12, [x]) == pytest.approx(
            real_kernel.real_density(basis_8_12, x)
        )

    def test_one_complex_point(self, real_basis):
        z = 0.5 + 0.5j
        value = real_kernel.correlation_rlm(real_basis, [], [z])
        assert value > 0
        assert value == pytest.approx(real_kernel.complex_pair_density(real_basis, z))
        assert value == pytest.approx(real_kernel.kappa_eps(real_basis, z, z).real)

    def test_repeated_real_point(self, basis_8_12):
        assert real_kernel.correlation_rlm(basis_8_12, [0.3, 0.3]) < 1e-9

    def test_lower_half_plane_rejected(self, real_basis):
        with pytest.raises(DomainError):
            real_kernel.correlation_rlm(real_basis, [], [0.5 - 0.5j])

    def test_densities_nonnegative(self, basis_8_12):
        x = np.linspace(-6.0, 6.0, 61)
        assert np.all(real_kernel.real_density(basis_8_12, x) > -1e-12)
        z = x + 0.7j
        assert np.all(real_kernel.complex_pair_density(basis_8_12, z) > -1e-12)

    def test_density_grid(self, real_basis):
        points = np.array([0.5 + 0.0j, 0.5 + 0.5j])
        pairs = real_kernel.density_grid_real(real_basis, points)
        assert pairs[0] == 0.0
        line = real_kernel.density_grid_real(real_basis, points, line=True)
        assert line[0] == pytest.approx(line[1])

    def test_cleft_along_real_axis(self, basis_8_12):
        x = np.linspace(-1.5, 1.5, 31)
        near = real_kernel.density_grid_real(basis_8_12, x + 0.01j)
        rows = np.array([0.2, 0.4, 0.8])
        away = real_kernel.density_grid_real(basis_8_12, x[:, None] + 1j * rows)
        assert near.max() < 0.5 * away.max()


class TestExpectedCounts:
    def test_closed_form(self):
        small = EnsembleParams(2, 10.0, Field.REAL)
        assert real_kernel.expected_real_in(small) == pytest.approx(1.95)
        large_s = EnsembleParams(4, 1e9, Field.REAL)
        assert real_kernel.expected_real_in(large_s) == pytest.approx(4.0)

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_quadrature_route(self, n, loose_spec):
        params = EnsembleParams(n, 2.0 * n, Field.REAL)
        numeric = real_kernel.expected_real_in_quadrature(SkewBasis(params), loose_spec)
        assert numeric == pytest.approx(real_kernel.expected_real_in(params), abs=1e-6)

    def test_all_roots_accounted_for(self, real_params, loose_spec):
        counts = real_kernel.expected_counts(real_params, loose_spec)
        assert counts.e_out > 0
        assert counts.complex_pairs > 0
        assert counts.total == pytest.approx(2.0, abs=1e-3)
        assert counts.eout_log_ratio > 0

    @pytest.mark.slow
    def test_outside_count_tracks_log_rate(self, loose_spec):
        # s = 2N keeps 1 - N / s at 1/2
        ratios = []
        for n in (4, 8, 16, 32):
            params = EnsembleParams(n, 2.0 * n, Field.REAL)
            counts = real_kernel.expected_counts(params, loose_spec)
            ratios.append(counts.e_out / -math.log(1.0 - n / (2.0 * n)))
        assert all(0.1 <= ratio <= 10.0 for ratio in ratios)
        assert max(ratios) / min(ratios) < 3.0
