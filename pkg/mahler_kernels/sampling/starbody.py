"""
Starbody Sampler

This module draws polynomials uniformly from the reciprocal Mahler starbody
{a : M^rec_lambda(a) <= 1} with lambda = (N + 1)/s, and computes empirical
root statistics over regions.

A point of the body is written as r u with u on the unit sphere of the
coefficient space and 0 < r <= 1/D(u), where D = (M^rec_lambda)^(1/lambda)
is the 1-homogeneous gauge. Uniform volume needs directions distributed
like D(u)^-d on the sphere, obtained by rejection against a certified lower
bound of D, and radii V^(1/d) / D(u).
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from dataclasses_json import dataclass_json
from scipy.optimize import minimize

from ..core.ensemble import EnsembleParams, PolynomialCoeffs, mahler_rec
from ..core.errors import DegeneratePolynomialError, ValidationError
from ..core.geometry import RealInterval, Region
from ..numerics import specfun
from ..numerics.linalg import DEGENERATE_LEADING, batch_poly_roots, pair_conjugates

logger = logging.getLogger("mahler_kernels.starbody")

# Directions tried by the random search for the gauge minimum
GAUGE_SEARCH_DIRECTIONS = 4096

# Local minimizations started from the best search directions
GAUGE_STARTS = 8

# The rejection bound is this fraction of the smallest gauge found
GAUGE_SAFETY = 0.9

# Seed of the gauge-bound search, independent of the sampling seed
GAUGE_SEED = 20240607

# Directions drawn per batch
BATCH_SIZE = 4096

DEFAULT_REALNESS_TOL = 1e-8

DEFAULT_TOLERANCE_SWEEP = (1e-10, 1e-8, 1e-6)

# log D assigned to degenerate directions during minimization
DEGENERATE_LOG_GAUGE = 700.0


@dataclass
class PolynomialSample:
    """A polynomial drawn from the starbody together with its roots"""

    coeffs: PolynomialCoeffs
    roots: np.ndarray
    seed: int
    index: int

    def to_record(self) -> dict:
        """JSON-lines record with [re, im] pairs"""
        return {
            "index": self.index,
            "seed": self.seed,
            "coeffs": self.coeffs.to_pairs(),
            "roots": [[float(r.real), float(r.imag)] for r in np.asarray(self.roots)],
        }

    @classmethod
    def from_record(cls, record: dict) -> "PolynomialSample":
        roots = np.array([complex(re, im) for re, im in record["roots"]], dtype=complex)
        return cls(
            coeffs=PolynomialCoeffs.from_pairs(record["coeffs"]),
            roots=roots,
            seed=int(record["seed"]),
            index=int(record["index"]),
        )


@dataclass_json
@dataclass
class SamplerStats:
    """Counters of one sampling run"""

    draws: int = 0
    accepted: int = 0
    resampled: int = 0
    degenerate: int = 0
    bound_violations: int = 0
    gauge_bound: float = 0.0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.draws if self.draws else 0.0


def real_dimension(params: EnsembleParams) -> int:
    """Real dimension d of the coefficient space"""
    return params.n + 1 if params.is_real else 2 * (params.n + 1)


def _check_bounded(params: EnsembleParams) -> None:
    if params.s <= params.n + 1:
        raise ValidationError(
            "The starbody is unbounded unless s > N + 1, "
            f"got N={params.n}, s={params.s}"
        )


def _to_coefficients(params: EnsembleParams, x: np.ndarray) -> np.ndarray:
    """Map real vectors of length d to coefficient rows"""
    size = params.n + 1
    if params.is_real:
        return x
    return x[..., :size] + 1j * x[..., size:]


def _log_gauge_rows(params: EnsembleParams, coeffs: np.ndarray) -> np.ndarray:
    """log D for coefficient rows with non-degenerate leading coefficients"""
    roots = batch_poly_roots(coeffs)
    log_phi = np.asarray(specfun.joukowski_log_modulus(roots)).sum(axis=-1)
    return np.log(np.abs(coeffs[:, -1])) + log_phi / params.sampler_lambda


def _degenerate(coeffs: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(coeffs), axis=-1)
    return np.abs(coeffs[:, -1]) <= DEGENERATE_LEADING * scale


def gauge(params: EnsembleParams, coeffs) -> float:
    """
    The 1-homogeneous gauge D(a) = M^rec_lambda(a)^(1/lambda), lambda = (N+1)/s.

    Args:
        params: Ensemble parameters
        coeffs: PolynomialCoeffs or coefficient vector of degree N

    Returns:
        D(a) = |a_N| prod |Phi(alpha)|^(1/lambda)
    """
    lam = params.sampler_lambda
    return mahler_rec(lam, coeffs) ** (1.0 / lam)


@lru_cache(maxsize=32)
def gauge_lower_bound(params: EnsembleParams) -> float:
    """
    Certified lower bound of the gauge on the unit sphere.

    Random search over GAUGE_SEARCH_DIRECTIONS directions followed by local
    minimization from the best GAUGE_STARTS of them; the result is the
    smallest value found times GAUGE_SAFETY.
    """
    _check_bounded(params)
    d = real_dimension(params)
    rng = np.random.default_rng(GAUGE_SEED)
    x = rng.standard_normal((GAUGE_SEARCH_DIRECTIONS, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    coeffs = _to_coefficients(params, x)
    keep = ~_degenerate(coeffs)
    log_values = np.full(len(x), np.inf)
    log_values[keep] = _log_gauge_rows(params, coeffs[keep])

    def objective(y: np.ndarray) -> float:
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return DEGENERATE_LOG_GAUGE
        row = _to_coefficients(params, (y / norm)[None, :])
        if _degenerate(row)[0]:
            return DEGENERATE_LOG_GAUGE
        return float(_log_gauge_rows(params, row)[0])

    best = float(np.min(log_values))
    for start in np.argsort(log_values)[:GAUGE_STARTS]:
        result = minimize(objective, x[start], method="Nelder-Mead")
        best = min(best, float(result.fun))
    bound = GAUGE_SAFETY * math.exp(best)
    logger.debug(f"Gauge lower bound for N={params.n}, s={params.s}: {bound:.6g}")
    return bound


def sample_radii(
    params: EnsembleParams, direction: np.ndarray, count: int, rng
) -> np.ndarray:
    """
    Radii along a fixed direction, distributed like r^(d-1) on (0, 1/D(u)].

    Args:
        params: Ensemble parameters
        direction: Unit vector in the real coefficient space
        count: Number of radii
        rng: numpy Generator

    Returns:
        Array of radii V^(1/d) / D(u)
    """
    d = real_dimension(params)
    coeffs = _to_coefficients(params, np.asarray(direction, dtype=float)[None, :])
    if _degenerate(coeffs)[0]:
        raise DegeneratePolynomialError(
            "Direction has a numerically zero leading coefficient"
        )
    scale = math.exp(float(_log_gauge_rows(params, coeffs)[0]))
    return rng.random(count) ** (1.0 / d) / scale


def _draw_pass(
    params: EnsembleParams,
    seed: int,
    count: int,
    bound: float,
    stats: SamplerStats,
) -> Tuple[List[PolynomialSample], Optional[float]]:
    """
    One rejection pass from a fresh generator.

    Returns the samples, or an empty list and a lowered bound when some
    direction has a gauge below the current bound.
    """
    d = real_dimension(params)
    log_bound = math.log(bound)
    rng = np.random.default_rng(seed)
    samples: List[PolynomialSample] = []

    while len(samples) < count:
        x = rng.standard_normal((BATCH_SIZE, d))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        accept_u = rng.random(BATCH_SIZE)
        radius_u = rng.random(BATCH_SIZE)
        stats.draws += BATCH_SIZE

        coeffs = _to_coefficients(params, x)
        degenerate = _degenerate(coeffs)
        stats.degenerate += int(degenerate.sum())
        stats.resampled += int(degenerate.sum())
        rows = np.flatnonzero(~degenerate)
        log_gauge = _log_gauge_rows(params, coeffs[rows])

        violations = int(np.sum(log_gauge < log_bound))
        if violations:
            stats.bound_violations += violations
            lowered = GAUGE_SAFETY * math.exp(float(log_gauge.min()))
            return [], min(bound, lowered)

        ratio = np.exp(d * (log_bound - log_gauge))
        accepted = rows[accept_u[rows] < ratio]
        stats.resampled += len(rows) - len(accepted)
        logger.debug(f"Batch accepted {len(accepted)} of {BATCH_SIZE} directions")

        for row in accepted:
            if len(samples) == count:
                break
            scale = math.exp(float(log_gauge[np.searchsorted(rows, row)]))
            radius = radius_u[row] ** (1.0 / d) / scale
            polynomial = PolynomialCoeffs(radius * coeffs[row])
            roots = polynomial.roots()
            samples.append(
                PolynomialSample(
                    coeffs=polynomial, roots=roots, seed=seed, index=len(samples)
                )
            )
            stats.accepted += 1

    return samples, None


def sample_starbody(
    params: EnsembleParams,
    seed: int,
    count: int,
    stats: Optional[SamplerStats] = None,
) -> List[PolynomialSample]:
    """
    Draw polynomials uniformly from the reciprocal Mahler starbody.

    A direction whose gauge falls below the rejection bound discards the
    run; the bound is lowered to GAUGE_SAFETY times that gauge and sampling
    restarts from the same seed, so every returned sample comes from a pass
    with a valid bound.

    Args:
        params: Ensemble parameters with s > N + 1
        seed: Seed of the numpy PCG64 generator; equal seeds give equal streams
        count: Number of samples
        stats: Optional counters updated in place; all but bound_violations
            describe the final pass

    Returns:
        count samples; real-field roots are conjugate-paired

    Raises:
        ValidationError: If the body is unbounded or count < 1
    """
    _check_bounded(params)
    if count < 1:
        raise ValidationError(f"count must be positive, got {count}")
    stats = stats if stats is not None else SamplerStats()
    bound = gauge_lower_bound(params)

    while True:
        stats.draws = stats.accepted = stats.resampled = stats.degenerate = 0
        stats.gauge_bound = bound
        samples, lowered = _draw_pass(params, seed, count, bound, stats)
        if lowered is None:
            return samples
        logger.warning(
            f"Gauge bound {bound:.6g} violated, restarting with {lowered:.6g}"
        )
        bound = lowered


# ---------------------------------------------------------------------------
# Root statistics
# ---------------------------------------------------------------------------


@dataclass_json
@dataclass
class RegionStats:
    """Empirical count statistics of one region"""

    region: dict
    mean: float
    var: float
    stderr: float
    n: int


@dataclass_json
@dataclass
class RootsReport:
    """Per-region statistics and the realness-tolerance sweep"""

    samples: int
    realness_tol: float
    regions: List[RegionStats] = field(default_factory=list)
    real_mean: float = 0.0
    real_mean_by_tol: Dict[str, float] = field(default_factory=dict)
    tolerance_spread: float = 0.0


def classify_roots(roots: Sequence[complex], realness_tol: float) -> np.ndarray:
    """
    Conjugate-pair a root multiset and mark its real members.

    Roots whose |Im| is below realness_tol times the root scale, or that
    stay unpaired, come back with an exactly zero imaginary part.
    """
    return pair_conjugates(np.asarray(roots, dtype=complex), tol=realness_tol)


def _summarize(region: Region, counts: np.ndarray) -> RegionStats:
    n = len(counts)
    mean = float(np.mean(counts))
    var = float(np.var(counts, ddof=1)) if n > 1 else 0.0
    return RegionStats(
        region=region.describe(), mean=mean, var=var, stderr=math.sqrt(var / n), n=n
    )


def roots_statistics(
    samples: Iterable[PolynomialSample],
    regions: Sequence[Region],
    realness_tol: float = DEFAULT_REALNESS_TOL,
    sweep: Sequence[float] = DEFAULT_TOLERANCE_SWEEP,
) -> RootsReport:
    """
    Empirical root counts per region.

    Real roots are identified by the conjugate-pairing pass with
    realness_tol. Interval regions count real roots only; planar regions
    count every root they contain. The mean number of real roots is also
    reported for each tolerance of the sweep.

    Args:
        samples: Polynomial samples
        regions: Regions to count in
        realness_tol: Relative tolerance of the real/complex split
        sweep: Tolerances of the sensitivity report

    Returns:
        RootsReport
    """
    samples = list(samples)
    if not samples:
        raise ValidationError("No samples to summarize")
    realness_tol = float(realness_tol)
    tolerances = sorted({float(tol) for tol in sweep} | {realness_tol})
    classified = {
        tol: [classify_roots(s.roots, tol) for s in samples] for tol in tolerances
    }
    chosen = classified[realness_tol]

    stats = []
    for region in regions:
        counts = np.array([int(np.sum(region.contains(r))) for r in chosen])
        stats.append(_summarize(region, counts))

    by_tol = {
        repr(tol): float(np.mean([np.sum(r.imag == 0) for r in classified[tol]]))
        for tol in tolerances
    }
    spread = max(by_tol.values()) - min(by_tol.values())
    if spread > 0:
        logger.warning(
            f"Real-root mean varies by {spread:.3g} across tolerances {tolerances}"
        )

    return RootsReport(
        samples=len(samples),
        realness_tol=realness_tol,
        regions=stats,
        real_mean=by_tol[repr(realness_tol)],
        real_mean_by_tol=by_tol,
        tolerance_spread=spread,
    )


def real_count_in(
    samples: Iterable[PolynomialSample], a: float, b: float
) -> RegionStats:
    """Statistics of the number of real roots in [a, b]"""
    return roots_statistics(samples, [RealInterval(a, b)]).regions[0]
