"""Tests for the starbody sampler and root statistics"""

import numpy as np
import pytest
from scipy import stats

from mahler_kernels.core.ensemble import (
    EnsembleParams,
    Field,
    PolynomialCoeffs,
    mahler_rec,
)
from mahler_kernels.core.errors import ValidationError
from mahler_kernels.core.geometry import Disk, RealInterval
from mahler_kernels.sampling import starbody
from mahler_kernels.sampling.starbody import PolynomialSample, SamplerStats


@pytest.fixture
def real_small():
    return EnsembleParams(2, 10.0, Field.REAL)


@pytest.fixture
def complex_small():
    return EnsembleParams(2, 8.0, Field.COMPLEX)


def _sample(coeffs, index=0):
    polynomial = PolynomialCoeffs(coeffs)
    return PolynomialSample(
        coeffs=polynomial, roots=polynomial.roots(), seed=0, index=index
    )


class TestGauge:
    def test_dimension(self, real_small, complex_small):
        assert starbody.real_dimension(real_small) == 3
        assert starbody.real_dimension(complex_small) == 6

    def test_homogeneity(self, real_small):
        a = np.array([0.3, -1.2, 0.8])
        assert starbody.gauge(real_small, 2.5 * a) == pytest.approx(
            2.5 * starbody.gauge(real_small, a), rel=1e-10
        )

    def test_lower_bound(self, real_small, rng):
        bound = starbody.gauge_lower_bound(real_small)
        assert bound > 0.0
        x = rng.standard_normal((200, 3))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        assert all(starbody.gauge(real_small, row) >= bound for row in x)

    def test_unbounded_body_rejected(self):
        with pytest.raises(ValidationError):
            starbody.gauge_lower_bound(EnsembleParams(2, 3.0, Field.REAL))


class TestSampler:
    def test_samples_lie_in_body(self, real_small):
        lam = real_small.sampler_lambda
        for sample in starbody.sample_starbody(real_small, seed=3, count=50):
            assert mahler_rec(lam, sample.coeffs) <= 1.0 + 1e-9

    def test_complex_field(self, complex_small):
        samples = starbody.sample_starbody(complex_small, seed=1, count=20)
        lam = complex_small.sampler_lambda
        assert len(samples) == 20
        assert all(np.iscomplexobj(s.coeffs.coeffs) for s in samples)
        assert all(mahler_rec(lam, s.coeffs) <= 1.0 + 1e-9 for s in samples)

    def test_same_seed_same_stream(self, real_small):
        first = starbody.sample_starbody(real_small, seed=11, count=10)
        second = starbody.sample_starbody(real_small, seed=11, count=10)
        other = starbody.sample_starbody(real_small, seed=12, count=10)
        assert [s.coeffs for s in first] == [s.coeffs for s in second]
        assert [s.coeffs for s in first] != [s.coeffs for s in other]

    def test_indices_and_seed(self, real_small):
        samples = starbody.sample_starbody(real_small, seed=5, count=7)
        assert [s.index for s in samples] == list(range(7))
        assert all(s.seed == 5 for s in samples)

    def test_real_roots_are_conjugate_closed(self, real_small):
        for sample in starbody.sample_starbody(real_small, seed=2, count=30):
            roots = np.asarray(sample.roots)
            np.testing.assert_allclose(
                np.sort_complex(roots), np.sort_complex(roots.conj()), atol=1e-12
            )

    def test_stats(self, real_small):
        counters = SamplerStats()
        starbody.sample_starbody(real_small, seed=0, count=25, stats=counters)
        assert counters.accepted == 25
        assert counters.draws >= counters.accepted
        assert 0.0 < counters.acceptance_rate <= 1.0
        bound = starbody.gauge_lower_bound(real_small)
        assert counters.gauge_bound == pytest.approx(bound)

    def test_violated_bound_restarts_from_seed(self, real_small, monkeypatch):
        true_bound = starbody.gauge_lower_bound(real_small)
        monkeypatch.setattr(
            starbody, "gauge_lower_bound", lambda params: 10.0 * true_bound
        )
        counters = SamplerStats()
        restarted = starbody.sample_starbody(
            real_small, seed=3, count=40, stats=counters
        )
        assert counters.bound_violations > 0
        assert counters.gauge_bound < 10.0 * true_bound
        assert counters.accepted == 40
        lam = real_small.sampler_lambda
        for sample in restarted:
            assert mahler_rec(lam, sample.coeffs) <= 1.0 + 1e-9

        # A valid bound from the start gives the same stream
        final = counters.gauge_bound
        monkeypatch.setattr(starbody, "gauge_lower_bound", lambda params: final)
        clean = SamplerStats()
        direct = starbody.sample_starbody(real_small, seed=3, count=40, stats=clean)
        assert clean.bound_violations == 0
        assert [s.coeffs for s in direct] == [s.coeffs for s in restarted]

    def test_invalid_requests(self, real_small):
        with pytest.raises(ValidationError):
            starbody.sample_starbody(real_small, seed=0, count=0)
        with pytest.raises(ValidationError):
            starbody.sample_starbody(
                EnsembleParams(4, 5.0, Field.REAL), seed=0, count=1
            )

    def test_radius_law(self, real_small, rng):
        direction = np.array([0.2, -0.5, 0.7])
        direction /= np.linalg.norm(direction)
        radii = starbody.sample_radii(real_small, direction, 2000, rng)
        scaled = (radii * starbody.gauge(real_small, direction)) ** 3
        assert np.all(scaled <= 1.0 + 1e-12)
        assert stats.kstest(scaled, "uniform").pvalue > 1e-3

    def test_record(self, real_small):
        sample = starbody.sample_starbody(real_small, seed=4, count=1)[0]
        record = sample.to_record()
        assert len(record["coeffs"]) == 3
        assert all(len(pair) == 2 for pair in record["roots"])
        restored = PolynomialSample.from_record(record)
        assert restored.coeffs == sample.coeffs
        assert restored.index == sample.index


class TestStatistics:
    def test_region_counts(self):
        samples = [_sample([-1.0, 0.0, 1.0]), _sample([1.0, 0.0, 1.0], index=1)]
        regions = [RealInterval(-2.0, 2.0), Disk(0.0, 1.5)]
        report = starbody.roots_statistics(samples, regions)
        line, disk = report.regions
        assert line.mean == pytest.approx(1.0)
        assert line.var == pytest.approx(2.0)
        assert disk.mean == pytest.approx(2.0)
        assert disk.var == 0.0
        assert report.real_mean == pytest.approx(1.0)
        assert report.tolerance_spread == 0.0

    def test_real_count_in(self):
        samples = [_sample([-1.0, 0.0, 1.0]), _sample([-9.0, 0.0, 1.0])]
        result = starbody.real_count_in(samples, -2.0, 2.0)
        assert result.mean == pytest.approx(1.0)
        assert result.n == 2

    def test_near_real_pair_depends_on_tolerance(self):
        # (x - 1)^2 + 1e-14 has |Im| of its roots 1e-7
        samples = [_sample([1.0 + 1e-14, -2.0, 1.0])]
        report = starbody.roots_statistics(samples, [], sweep=(1e-10, 1e-6))
        assert report.real_mean_by_tol["1e-10"] == 0.0
        assert report.real_mean_by_tol["1e-06"] == 2.0
        assert report.tolerance_spread == 2.0

    def test_close_tolerances_keep_separate_entries(self):
        samples = [_sample([-1.0, 0.0, 1.0])]
        report = starbody.roots_statistics(
            samples, [], realness_tol=1.4e-8, sweep=(1e-8, 1.4e-8)
        )
        assert set(report.real_mean_by_tol) == {"1e-08", "1.4e-08"}
        assert report.real_mean == pytest.approx(2.0)

    def test_no_samples(self):
        with pytest.raises(ValidationError):
            starbody.roots_statistics([], [RealInterval(-2.0, 2.0)])

    @pytest.mark.slow
    def test_expected_real_roots(self, real_small):
        samples = starbody.sample_starbody(real_small, seed=2024, count=20000)
        result = starbody.real_count_in(samples, -2.0, 2.0)
        assert abs(result.mean - 1.95) < 3.0 * result.stderr
