"""Tests for the scaling limits and the convergence harness"""

import math

import numpy as np
import pytest

from mahler_kernels.core.ensemble import EnsembleParams, Field
from mahler_kernels.core.errors import DomainError, ValidationError
from mahler_kernels.kernels import complex_kernel, limits
from mahler_kernels.kernels.limits import (
    KernelKind,
    LimitParams,
    Regime,
    ScalingFrame,
    Target,
)
from mahler_kernels.numerics import specfun


class TestParameters:
    @pytest.mark.parametrize(
        "lam, c", [(1.5, math.inf), (-0.1, math.inf), (1.0, 0.0), (0.5, 2.0)]
    )
    def test_invalid(self, lam, c):
        with pytest.raises(ValidationError):
            LimitParams(lam, c)

    def test_s_for(self):
        assert LimitParams(1.0, 2.0).s_for(10) == 12.0
        assert LimitParams(0.5).s_for(10) == 20.0
        assert LimitParams(1.0).s_for(16) == 20.0
        assert LimitParams(0.0).s_for(4) == 20.0

    def test_frames(self):
        with pytest.raises(DomainError):
            ScalingFrame(Regime.BULK, center=2.5)
        with pytest.raises(ValidationError):
            ScalingFrame(Regime.EDGE, edge=1.0)
        with pytest.raises(ValidationError):
            ScalingFrame("corner")
        edge = ScalingFrame(Regime.EDGE)
        assert edge.point(10, 1.0) == pytest.approx(1.99)
        lower = ScalingFrame(Regime.EDGE, edge=-2.0)
        assert lower.point(10, 1.0) == pytest.approx(-1.99)
        bulk = ScalingFrame(Regime.BULK, center=1.0)
        assert bulk.omega == pytest.approx(1.0 / math.sqrt(3.0))


class TestBulk:
    def test_diagonal_values(self):
        assert limits.limit_bulk(LimitParams(0.0), KernelKind.COMPLEX, 0.3, 0.3) == (
            pytest.approx(1.0 / math.pi)
        )
        value = limits.limit_bulk(LimitParams(1.0), "complex-K", 0.3, 0.3)
        assert value == pytest.approx(2.0 / (3.0 * math.pi))

    def test_sine_kernel(self):
        lp = LimitParams(0.0)
        assert limits.limit_bulk(lp, KernelKind.COMPLEX, 0.0, math.pi) == pytest.approx(
            0.0, abs=1e-14
        )
        a, b = 0.4, 1.9
        assert limits.limit_bulk(lp, KernelKind.COMPLEX, a, b) == pytest.approx(
            math.sin(b - a) / (math.pi * (b - a)), abs=1e-12
        )

    def test_structural_zeros(self):
        lp = LimitParams(0.5)
        assert limits.limit_bulk(lp, KernelKind.KAPPA, 0.7, 0.7) == 0.0
        assert limits.limit_bulk(lp, KernelKind.EPS_KAPPA_EPS, 0.7, 0.7) == 0.0
        assert limits.limit_bulk(lp, KernelKind.KAPPA, 0.2, 1.1) == pytest.approx(
            -limits.limit_bulk(lp, KernelKind.KAPPA, 1.1, 0.2)
        )

    def test_hermitian(self):
        lp = LimitParams(0.5)
        a, b = 0.3 + 0.4j, -0.5 + 0.1j
        assert limits.limit_bulk(lp, KernelKind.COMPLEX, a, b) == pytest.approx(
            np.conj(limits.limit_bulk(lp, KernelKind.COMPLEX, b, a))
        )

    def test_eps_kappa_eps_needs_real_arguments(self):
        with pytest.raises(DomainError):
            limits.limit_bulk(LimitParams(0.5), KernelKind.EPS_KAPPA_EPS, 1j, 0.0)

    def test_no_bulk_general_kinds(self):
        with pytest.raises(ValidationError):
            limits.limit_bulk(LimitParams(0.5), KernelKind.KAPPA_EPS_GENERAL, 0.0, 0.0)


class TestEdge:
    def test_origin(self):
        assert limits.limit_edge(LimitParams(0.0), KernelKind.COMPLEX, 0.0, 0.0) == (
            pytest.approx(1.0 / (6.0 * math.pi))
        )

    @pytest.mark.parametrize("a, b", [(1.3, 2.1), (0.4, 4.8), (3.0, 0.7)])
    def test_bessel_kernel(self, a, b):
        closed = math.sin(a - b) / (a - b) - math.sin(a + b) / (a + b)
        closed /= 4.0 * math.pi * a * b
        value = limits.limit_edge(LimitParams(0.0), KernelKind.COMPLEX, a, b)
        assert value == pytest.approx(closed, abs=1e-12)

    def test_bessel_pairs(self):
        assert limits.bessel_pair_11(1.7, 1.7) == 0.0
        assert limits.bessel_pair_22(1.7, 1.7) == 0.0
        lp = LimitParams(0.5)
        assert limits.limit_edge(lp, KernelKind.EPS_KAPPA_EPS, 1.2, 1.2) == 0.0

    def test_kappa_antisymmetric(self):
        lp = LimitParams(0.5)
        assert limits.limit_edge(lp, KernelKind.KAPPA, 0.5, 1.5) == pytest.approx(
            -limits.limit_edge(lp, KernelKind.KAPPA, 1.5, 0.5)
        )

    @pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
    def test_general_form_on_real_line(self, lam):
        lp = LimitParams(lam)
        for a, b in ((1.2, 0.7), (0.3 + 0.4j, 2.0)):
            general = limits.limit_edge(lp, KernelKind.KAPPA_EPS_GENERAL, a, b)
            assert general == pytest.approx(
                limits.limit_edge(lp, KernelKind.KAPPA_EPS, a, b), rel=1e-8, abs=1e-12
            )
        general = limits.limit_edge(lp, KernelKind.EPS_KAPPA_EPS_GENERAL, 0.9, 1.6)
        assert general == pytest.approx(
            limits.limit_edge(lp, KernelKind.EPS_KAPPA_EPS, 0.9, 1.6),
            rel=1e-8,
            abs=1e-12,
        )

    def test_general_path_domain(self):
        with pytest.raises(DomainError):
            limits.limit_edge(
                LimitParams(0.5), KernelKind.KAPPA_EPS_GENERAL, 1.0, 1.0 + 1.0j
            )
        with pytest.raises(DomainError):
            limits.limit_edge(LimitParams(0.0), KernelKind.KAPPA_EPS_GENERAL, 1.0, 1.0j)

    def test_kappa_eps_needs_real_b(self):
        with pytest.raises(DomainError):
            limits.limit_edge(LimitParams(0.5), KernelKind.KAPPA_EPS, 1.0, 1.0j)


class TestExterior:
    def test_diagonal_value(self):
        value = limits.limit_exterior_complex_diagonal(LimitParams(1.0, 1.0), 2.5)
        assert value == pytest.approx(0.06288, abs=1e-5)

    def test_diagonal_needs_finite_c(self):
        with pytest.raises(DomainError):
            limits.limit_exterior_complex_diagonal(LimitParams(1.0), 2.5)

    def test_complex_hermitian(self):
        lp = LimitParams(1.0, 2.0)
        z, w = 2.5 + 1.0j, -3.0 + 0.5j
        assert limits.limit_exterior_complex(lp, z, w) == pytest.approx(
            np.conj(limits.limit_exterior_complex(lp, w, z))
        )

    def test_cut_rejected(self):
        with pytest.raises(DomainError):
            limits.limit_exterior_complex(LimitParams(0.5), 1.0, 3.0)

    def test_real_antisymmetric(self):
        lp = LimitParams(1.0, 2.0)
        z, w = 2.5 + 1.0j, 3.5 - 0.5j
        assert limits.limit_exterior_real(lp, z, z) == 0.0
        assert limits.limit_exterior_real(lp, z, w) == pytest.approx(
            -limits.limit_exterior_real(lp, w, z)
        )

    def test_f_prefactor(self):
        assert limits._f_prefactor(1.0) == pytest.approx(1.0 / math.pi)

    def test_f_antisymmetric(self):
        c, x, y = 1.5, 2.5, -3.5
        assert limits.limit_exterior_matrix_f(c, x, y) == pytest.approx(
            -limits.limit_exterior_matrix_f(c, y, x), abs=1e-10
        )

    @pytest.mark.parametrize(
        "x, y", [(2.5, 3.0), (3.5, 2.2), (-2.5, 4.0), (-3.0, -5.0)]
    )
    def test_mixed_derivative_is_exterior_kernel(self, x, y):
        c = 2.0
        lp = LimitParams(1.0, c)
        scale = abs(specfun.joukowski_phi(x) * specfun.joukowski_phi(y)) ** (-c)
        expected = scale * limits.limit_exterior_real(lp, x, y)
        assert limits.limit_exterior_matrix_f_dxy(c, x, y) / c == pytest.approx(
            np.real(expected), rel=1e-10
        )

    def test_partials_by_differences(self):
        c, x, y, h = 2.0, 2.7, 3.4, 1e-4
        f = limits.limit_exterior_matrix_f
        dx = (f(c, x + h, y) - f(c, x - h, y)) / (2 * h)
        dy = (f(c, x, y + h) - f(c, x, y - h)) / (2 * h)
        assert limits.limit_exterior_matrix_f_dx(c, x, y) == pytest.approx(dx, rel=1e-5)
        assert limits.limit_exterior_matrix_f_dy(c, x, y) == pytest.approx(dy, rel=1e-5)
        fdx = limits.limit_exterior_matrix_f_dx
        dxy = (fdx(c, x, y + h) - fdx(c, x, y - h)) / (2 * h)
        value = limits.limit_exterior_matrix_f_dxy(c, x, y)
        assert value == pytest.approx(dxy, rel=1e-5)

    def test_f_needs_exterior_points(self):
        with pytest.raises(DomainError):
            limits.limit_exterior_matrix_f(1.0, 1.0, 3.0)
        with pytest.raises(DomainError):
            limits.limit_exterior_matrix_f(math.inf, 3.0, 4.0)


class TestLimitDensity:
    def test_edge_reflection(self):
        lp = LimitParams(0.5)
        zeta = np.array([-1.0 + 0.5j, -2.0 - 1.0j, 3.0 + 0.2j])
        right = ScalingFrame(Regime.EDGE, edge=2.0)
        left = ScalingFrame(Regime.EDGE, edge=-2.0)
        for field in (Field.COMPLEX, Field.REAL):
            np.testing.assert_allclose(
                limits.limit_density(lp, left, field, -zeta),
                limits.limit_density(lp, right, field, zeta),
                rtol=1e-12,
            )

    def test_bulk_unweighted(self):
        lp = LimitParams(0.5)
        frame = ScalingFrame(Regime.BULK)
        value = limits.limit_density(lp, frame, Field.COMPLEX, 0.0, False)
        assert float(value) == pytest.approx((1.0 - 0.25 / 3.0) / math.pi)

    def test_real_field_vanishes_on_axis(self):
        lp = LimitParams(0.5)
        frame = ScalingFrame(Regime.BULK)
        value = limits.limit_density(lp, frame, Field.REAL, np.array([0.3]))
        assert value[0] == 0.0

    def test_exterior_cut_is_nan(self):
        lp = LimitParams(1.0, 1.0)
        values = limits.limit_density(
            lp, ScalingFrame(Regime.EXTERIOR), Field.COMPLEX, np.array([0.5, 2.5])
        )
        assert math.isnan(values[0])
        assert values[1] == pytest.approx(0.06288, abs=1e-5)


class TestConverge:
    def test_bulk_rate(self):
        rows = limits.converge(
            Target.BULK_COMPLEX, [16, 32, 64], LimitParams(0.5), [(0.0, 0.0)]
        )
        errors = limits.sup_errors(rows)
        assert errors[16] > errors[32] > errors[64]
        assert errors[32] / errors[64] == pytest.approx(4.0, rel=1e-2)
        assert errors[64] == pytest.approx(1.0 / (12.0 * math.pi * 64**2), rel=1e-2)

    def test_exterior_diagonal(self):
        lp = LimitParams(1.0, 2.0)
        params = EnsembleParams(256, 258.0)
        assert complex_kernel.density(params, 2.5) == pytest.approx(
            limits.limit_exterior_complex_diagonal(lp, 2.5), rel=1e-2
        )

    def test_rows_are_ordered(self):
        rows = limits.converge(
            "bulk-kappa", [4, 8], LimitParams(0.5), [(0.0, 0.5), (0.1j, 0.2)], threads=2
        )
        assert [row.n for row in rows] == [4, 4, 8, 8]
        assert rows[0].point == rows[2].point != rows[1].point == rows[3].point
        assert all(row.s == 2.0 * row.n for row in rows)

    @pytest.mark.parametrize(
        "target, n_values, frame",
        [
            ("bulk-complex", [32, 16], None),
            ("bulk-complex", [], None),
            ("bulk-kappa", [4, 7], None),
            ("bulk-complex", [4, 8], ScalingFrame(Regime.EDGE)),
            ("sideways", [4, 8], None),
        ],
    )
    def test_invalid(self, target, n_values, frame):
        with pytest.raises(ValidationError):
            limits.converge(target, n_values, LimitParams(0.5), [(0.0, 0.0)], frame)

    def test_finite_c_targets(self):
        with pytest.raises(ValidationError):
            limits.converge("exterior-f", [4, 8], LimitParams(1.0), [(3.0, 4.0)])
