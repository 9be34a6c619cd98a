"""
Metropolis Sampler for the Complex Ensemble

Random-walk Metropolis chain on N-point configurations with stationary
density proportional to prod phi(z_n)^2 prod_{m<n} |z_n - z_m|^2. Used to
cross-check the starbody sampler and the kernel predictions.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.ensemble import EnsembleParams, Field
from ..core.errors import ValidationError
from ..core.geometry import Region
from ..numerics import specfun

logger = logging.getLogger("mahler_kernels.mcmc")

# Acceptance rates below this are reported as a warning
LOW_ACCEPTANCE = 0.05

DEFAULT_BATCHES = 20


def log_density(params: EnsembleParams, points: Sequence[complex]) -> float:
    """Unnormalized log-density 2 sum log phi(z_n) + 2 sum_{m<n} log |z_n - z_m|"""
    z = np.asarray(points, dtype=complex)
    weight = -2.0 * params.s * float(np.sum(specfun.joukowski_log_modulus(z)))
    diffs = np.abs(z[:, None] - z[None, :])[np.triu_indices(len(z), k=1)]
    if np.any(diffs == 0):
        return -math.inf
    return weight + 2.0 * float(np.sum(np.log(diffs)))


def _site_terms(
    params: EnsembleParams, z: np.ndarray, k: int, candidate: complex
) -> float:
    """Terms of the log-density that involve point k placed at candidate"""
    others = np.delete(z, k)
    distances = np.abs(others - candidate)
    if np.any(distances == 0):
        return -math.inf
    weight = -2.0 * params.s * float(specfun.joukowski_log_modulus(candidate))
    return weight + 2.0 * float(np.sum(np.log(distances)))


def batch_means_stderr(trace: np.ndarray, batches: int = DEFAULT_BATCHES) -> float:
    """Standard error of a chain average from non-overlapping batch means"""
    trace = np.asarray(trace, dtype=float)
    size = len(trace) // batches
    if size < 1:
        return math.nan
    means = trace[: size * batches].reshape(batches, size).mean(axis=1)
    return float(np.std(means, ddof=1) / math.sqrt(batches))


@dataclass
class MCMCResult:
    """Thinned chain states and acceptance diagnostics"""

    states: np.ndarray
    accepted: int
    proposed: int
    seed: int

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else 0.0

    @property
    def zero_acceptance(self) -> bool:
        return self.accepted == 0

    def region_counts(self, region: Region) -> np.ndarray:
        """Number of points in the region for every kept state"""
        return region.contains(self.states).sum(axis=1)

    def region_mean(
        self, region: Region, batches: int = DEFAULT_BATCHES
    ) -> Tuple[float, float]:
        """Chain average of the region count and its batch-means standard error"""
        trace = self.region_counts(region)
        return float(np.mean(trace)), batch_means_stderr(trace, batches)

    def reflected(self) -> "MCMCResult":
        """The chain mirrored across the real axis"""
        return MCMCResult(np.conj(self.states), self.accepted, self.proposed, self.seed)


def initial_configuration(n: int) -> np.ndarray:
    """Distinct starting points near [-2, 2], alternating above and below it"""
    k = np.arange(n)
    return 2.0 * np.cos(np.pi * (k + 0.5) / n) + 0.05j * (-1.0) ** k


def mcmc_complex(
    params: EnsembleParams,
    seed: int,
    chain_length: int,
    step_scale: float,
    burn_in: Optional[int] = None,
    thin: int = 1,
    start: Optional[Sequence[complex]] = None,
) -> MCMCResult:
    """
    Run a single-site random-walk Metropolis chain.

    Each sweep proposes z_k + step_scale * (xi + i eta) with standard normal
    xi, eta for every point in turn.

    Args:
        params: Complex ensemble parameters
        seed: Seed of the numpy generator
        chain_length: Number of sweeps kept before thinning
        step_scale: Proposal standard deviation per coordinate
        burn_in: Sweeps discarded first (default chain_length // 10)
        thin: Keep every thin-th sweep
        start: Optional starting configuration

    Returns:
        MCMCResult with states of shape (kept, N)
    """
    params.require(Field.COMPLEX)
    if chain_length < 1 or thin < 1:
        raise ValidationError("chain_length and thin must be positive")
    if not step_scale > 0:
        raise ValidationError(f"step_scale must be positive, got {step_scale}")
    burn_in = chain_length // 10 if burn_in is None else burn_in

    rng = np.random.default_rng(seed)
    n = params.n
    z = np.array(
        start if start is not None else initial_configuration(n), dtype=complex
    )
    if z.shape != (n,):
        raise ValidationError(f"Starting configuration needs {n} points")

    kept = []
    accepted = 0
    proposed = 0
    for sweep in range(burn_in + chain_length):
        steps = step_scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        thresholds = np.log(rng.random(n))
        for k in range(n):
            candidate = z[k] + steps[k]
            current = _site_terms(params, z, k, z[k])
            delta = _site_terms(params, z, k, candidate) - current
            proposed += 1
            if thresholds[k] < delta:
                z[k] = candidate
                accepted += 1
        if sweep >= burn_in and (sweep - burn_in) % thin == 0:
            kept.append(z.copy())

    result = MCMCResult(
        states=np.array(kept), accepted=accepted, proposed=proposed, seed=seed
    )
    if result.zero_acceptance:
        logger.warning(
            f"No proposal accepted with step_scale={step_scale}; the step is too large"
        )
    elif result.acceptance_rate < LOW_ACCEPTANCE:
        logger.warning(f"Low acceptance rate {result.acceptance_rate:.3f}")
    logger.debug(
        f"MCMC kept {len(kept)} states, acceptance {result.acceptance_rate:.3f}"
    )
    return result
