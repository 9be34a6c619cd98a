"""
Identity Suite

Checks the closed-form identities the kernels are built from against
independent numerics: Pfaffians against determinants, skew-moments and
skew-orthonormality against quadrature, both polynomial representations
against each other, the finite sum identities, antiderivatives, Gamma_n(s)
and Delta_n(s), the closed eps transforms and the expected root counts.
Every check reports its measured residual next to the threshold.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from dataclasses_json import dataclass_json

from ..core.ensemble import EnsembleParams, Field
from ..core.geometry import WholePlane
from ..kernels import complex_kernel, real_kernel, skew_system
from ..kernels.skew_system import Perturbation, SkewBasis
from ..numerics import quadrature
from ..numerics.linalg import SkewMatrix, determinant, pfaffian
from ..numerics.quadrature import QuadratureSpec

logger = logging.getLogger("mahler_kernels.verify")

# Suite defaults; the orthonormality and eps checks follow the configured
# real ensemble when one is given
DEFAULT_N = 8
DEFAULT_S = 12.0
MOMENT_S = 10.0
MOMENT_SIZE = 8
DUAL_N = 22
DUAL_S = 30.0
SUM_ORDERS = range(7)
EXPECTED_CASES = ((2, 4.0), (2, 10.0), (4, 8.0), (8, 16.0))

# The perturbation applied in test mode
TEST_PERTURBATION = Perturbation(index=1, delta=1e-3)


@dataclass_json
@dataclass
class CheckResult:
    """Outcome of one identity"""

    name: str
    residual: float
    threshold: float
    passed: bool
    detail: str = ""


@dataclass_json
@dataclass
class VerifyReport:
    """All checks of one run"""

    checks: List[CheckResult]
    perturbed: bool = False

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "perturbed": self.perturbed,
            "failures": self.failures,
            "checks": [check.to_dict() for check in self.checks],
        }


def _result(
    name: str, residual: float, threshold: float, detail: str = ""
) -> CheckResult:
    residual = float(residual)
    # nan fails
    passed = bool(residual <= threshold)
    return CheckResult(
        name=name,
        residual=residual,
        threshold=threshold,
        passed=passed,
        detail=detail,
    )


def _real_line_integral(f: Callable, spec: QuadratureSpec) -> float:
    inner = quadrature.integrate_panels(f, [-2.0, 0.0, 2.0], spec)
    right = quadrature.integrate_semiinfinite(f, 2.0, 1, spec)
    left = quadrature.integrate_semiinfinite(f, -2.0, -1, spec)
    return float(inner + right + left)


class IdentitySuite:
    """
    The verify suite.

    Args:
        params: Real ensemble for the orthonormality and eps checks
        spec: Quadrature settings of the numerical sides
        perturb: Perturb one skew-orthogonal coefficient (test mode)
        seed: Seed of the random Pfaffian matrices
    """

    def __init__(
        self,
        params: Optional[EnsembleParams] = None,
        spec: Optional[QuadratureSpec] = None,
        perturb: bool = False,
        seed: int = 0,
    ):
        self.params = params or EnsembleParams(DEFAULT_N, DEFAULT_S, Field.REAL)
        self.params.require(Field.REAL)
        self.spec = spec or QuadratureSpec(tol=1e-12)
        self.perturbation = TEST_PERTURBATION if perturb else None
        self.seed = seed
        self.basis = SkewBasis(self.params, self.perturbation)

    def run(self) -> VerifyReport:
        checks = []
        for check in (
            self.check_pfaffian,
            self.check_skew_moments,
            self.check_orthonormality,
            self.check_dual_representation,
            self.check_sum_identities,
            self.check_antiderivatives,
            self.check_gamma,
            self.check_delta,
            self.check_eps_closed_forms,
            self.check_eps_junctions,
            self.check_expected_real_in,
            self.check_count_conservation,
        ):
            result = check()
            level = logging.INFO if result.passed else logging.WARNING
            logger.log(
                level,
                f"{result.name}: residual {result.residual:.3e} "
                f"(threshold {result.threshold:.1e}) "
                f"{'ok' if result.passed else 'FAILED'}",
            )
            checks.append(result)
        return VerifyReport(checks=checks, perturbed=self.perturbation is not None)

    def check_pfaffian(self) -> CheckResult:
        example = SkewMatrix.from_upper(
            4, {(1, 2): 1, (1, 3): 3, (1, 4): 5, (2, 3): 6, (2, 4): 4, (3, 4): 2}
        )
        residual = abs(pfaffian(example) - 20.0)

        rng = np.random.default_rng(self.seed)
        for dimension in range(2, 17, 2):
            a = rng.standard_normal((dimension, dimension))
            matrix = SkewMatrix(a - a.T)
            det = determinant(matrix.entries)
            error = abs(pfaffian(matrix) ** 2 - det) / max(abs(det), 1e-300)
            residual = max(residual, error)
        return _result(
            "pfaffian", residual, 1e-9, "Pf^2 = det for dimensions 2-16; 4x4 example"
        )

    def check_skew_moments(self) -> CheckResult:
        params = EnsembleParams(MOMENT_SIZE, MOMENT_S, Field.REAL)
        gram = skew_system.skew_u_gram(params, MOMENT_SIZE - 1, self.spec)
        exact = np.array(
            [
                [
                    skew_system.skew_moment_exact(params, m, n)
                    for n in range(1, MOMENT_SIZE + 1)
                ]
                for m in range(1, MOMENT_SIZE + 1)
            ]
        )
        # relative for nonzero moments, absolute 1e-8 for the vanishing ones
        residual = np.max(np.abs(gram - exact) / np.maximum(np.abs(exact), 1e-2))
        return _result(
            "skew-moments", residual, 1e-6, f"s={MOMENT_S}, m, n <= {MOMENT_SIZE}"
        )

    def check_orthonormality(self) -> CheckResult:
        gram = skew_system.skew_gram(self.basis, self.spec)
        n = self.params.n
        expected = np.zeros((n, n))
        for k in range(n // 2):
            expected[2 * k, 2 * k + 1] = 1.0
            expected[2 * k + 1, 2 * k] = -1.0
        residual = np.max(np.abs(gram - expected))
        return _result(
            "skew-orthonormality",
            residual,
            1e-6,
            f"N={n}, s={self.params.s} by quadrature",
        )

    def check_dual_representation(self) -> CheckResult:
        basis = SkewBasis(EnsembleParams(DUAL_N, DUAL_S, Field.REAL))
        x = np.linspace(-2.5, 2.5, 200)
        gegenbauer = basis.evaluate_all(x)
        expansion = basis.evaluate_expansion_all(x)
        scale = np.max(np.abs(expansion), axis=1, keepdims=True)
        residual = np.max(np.abs(gegenbauer - expansion) / scale)
        return _result(
            "dual-representation", residual, 1e-10, f"n < {DUAL_N} on [-2.5, 2.5]"
        )

    def check_sum_identities(self) -> CheckResult:
        residual = 0.0
        for n in SUM_ORDERS:
            for a in (0.3, 1.0, 2.7, n + 1.0):
                report = skew_system.sum_identities(n, a)
                for check in report.checks:
                    error = abs(check.residual) / max(1.0, abs(check.rhs))
                    residual = max(residual, error)
        return _result(
            "sum-identities", residual, 1e-12, "n <= 6, a in {0.3, 1, 2.7, n+1}"
        )

    def check_antiderivatives(self) -> CheckResult:
        residual = max(
            abs(skew_system.antiderivative_residual(MOMENT_S, m, x, self.spec))
            for m in range(1, MOMENT_SIZE + 1)
            for x in (-3.0, -1.5, 0.5, 1.9, 2.5, 4.0)
        )
        return _result(
            "antiderivatives", residual, 1e-8, f"s={MOMENT_S}, m <= {MOMENT_SIZE}"
        )

    def check_gamma(self) -> CheckResult:
        spot = skew_system.gamma_n_s(EnsembleParams(2, 10.0, Field.REAL), 0)
        residual = abs(spot - 75.0 / 99.0)
        for k in range(self.params.n // 2):
            closed = skew_system.gamma_n_s(self.params, k)
            numeric = _real_line_integral(
                lambda t: self.basis.weighted_all(t)[2 * k].real, self.spec
            )
            residual = max(residual, abs(closed - numeric) / max(1.0, abs(closed)))
        return _result(
            "gamma-n-s",
            residual,
            1e-6,
            "closed form vs quadrature; Gamma_0(10) = 75/99",
        )

    def check_delta(self) -> CheckResult:
        residual = 0.0
        for k in range(self.params.n // 2):
            moment = skew_system.half_line_odd_moment(self.params, k)
            numeric = quadrature.integrate_semiinfinite(
                lambda t: self.basis.weighted_all(t)[2 * k + 1].real, 0.0, 1, self.spec
            )
            residual = max(
                residual,
                abs(moment - float(numeric)),
                abs(skew_system.delta_n_s(self.params, k)),
            )
        return _result(
            "delta-n-s", residual, 1e-6, "half-line odd moments and Delta_n = 0"
        )

    def check_eps_closed_forms(self) -> CheckResult:
        points = np.concatenate(
            [np.linspace(-1.95, 1.95, 25), np.linspace(2.2, 6.0, 25)]
        )
        closed = real_kernel.eps_all(self.basis, points).real
        residual = 0.0
        for n in range(self.params.n):
            numeric = np.array(
                [
                    real_kernel.eps_transform_numeric(self.basis, n, x, self.spec)
                    for x in points
                ]
            )
            residual = max(residual, float(np.max(np.abs(closed[n] - numeric))))
        return _result(
            "eps-closed-forms", residual, 1e-6, "50 points in (-2, 2) and (2, 6]"
        )

    def check_eps_junctions(self) -> CheckResult:
        gap = 1e-9
        points = np.array([-2.0 - gap, -2.0 + gap, 2.0 - gap, 2.0 + gap])
        values = real_kernel.eps_all(self.basis, points).real
        residual = float(
            np.max(np.abs(values[:, 0] - values[:, 1]))
            + np.max(np.abs(values[:, 2] - values[:, 3]))
        )
        return _result("eps-junctions", residual, 1e-6, "continuity at -2 and 2")

    def check_expected_real_in(self) -> CheckResult:
        spot = real_kernel.expected_real_in(EnsembleParams(2, 10.0, Field.REAL))
        residual = abs(spot - 1.95)
        for n, s in EXPECTED_CASES:
            params = EnsembleParams(n, s, Field.REAL)
            closed = real_kernel.expected_real_in(params)
            basis = SkewBasis(params)
            numeric = real_kernel.expected_real_in_quadrature(basis, self.spec)
            residual = max(residual, abs(closed - numeric))
        return _result(
            "expected-real-in",
            residual,
            1e-6,
            "closed form vs quadrature of kappa-eps(x, x)",
        )

    def check_count_conservation(self) -> CheckResult:
        spec = QuadratureSpec(tol=1e-8)
        real_params = EnsembleParams(2, 10.0, Field.REAL)
        real_total = real_kernel.expected_counts(real_params, spec).total
        complex_total = complex_kernel.expected_count_complex(
            EnsembleParams(4, 8.0, Field.COMPLEX), WholePlane(), spec
        )
        residual = max(abs(real_total - 2.0), abs(complex_total - 4.0))
        return _result(
            "count-conservation", residual, 1e-3, "real N=2, s=10 and complex N=4, s=8"
        )


def run_suite(
    params: Optional[EnsembleParams] = None,
    spec: Optional[QuadratureSpec] = None,
    perturb: bool = False,
    seed: int = 0,
) -> VerifyReport:
    """Run every identity check and return the report"""
    report = IdentitySuite(params, spec, perturb, seed).run()
    passed = len(report.checks) - len(report.failures)
    logger.info(f"Verify: {passed}/{len(report.checks)} passed")
    return report
