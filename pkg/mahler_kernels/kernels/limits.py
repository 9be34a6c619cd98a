"""
Scaling Limits

This module implements the limiting kernels of both ensembles in the three
scaling regimes (outside [-2, 2], in the bulk of (-2, 2) and at the edge
point 2), the function F that drives the exterior matrix kernel, and a
convergence harness comparing rescaled finite-N kernels with their limits.

Integrals over t in [0, 1] use a fixed 64-point Gauss-Legendre rule since
their integrands are entire in t. Path integrals of the general edge forms
run along the straight segment from 0 and are refined by order doubling.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from dataclasses_json import dataclass_json

from ..core.ensemble import EnsembleParams, Field
from ..core.errors import DomainError, ValidationError
from ..numerics import quadrature, specfun
from ..numerics.quadrature import QuadratureSpec
from ..utils.workers import map_ordered
from . import complex_kernel, real_kernel
from .skew_system import SkewBasis

logger = logging.getLogger("mahler_kernels.limits")

# Gauss-Legendre order of every integral over [0, 1]
UNIT_ORDER = 64

# Starting order of path integrals, doubled per refinement level
PATH_ORDER = 32

# Points closer than this to [-2, 2] count as lying on the cut
CUT_GUARD = 1e-12

# A path end b is admissible when |Im b^2| is below this (relative)
PATH_GUARD = 1e-12

DEFAULT_LIMIT_SPEC = QuadratureSpec(tol=1e-12, max_levels=6)


class Regime(str, Enum):
    """Scaling regime of a limit kernel"""

    EXTERIOR = "exterior"
    BULK = "bulk"
    EDGE = "edge"


class KernelKind(str, Enum):
    """Which kernel entry a bulk or edge limit describes"""

    COMPLEX = "complex-K"
    KAPPA = "kappa"
    KAPPA_EPS = "kappa-eps"
    EPS_KAPPA_EPS = "eps-kappa-eps"
    KAPPA_EPS_GENERAL = "kappa-eps-general"
    EPS_KAPPA_EPS_GENERAL = "eps-kappa-eps-general"


# Parity of each kernel under (z, w) -> (-z, -w), used for the edge at -2
EDGE_REFLECTION_SIGN = {
    KernelKind.COMPLEX: 1.0,
    KernelKind.KAPPA: -1.0,
    KernelKind.KAPPA_EPS: 1.0,
    KernelKind.EPS_KAPPA_EPS: -1.0,
    KernelKind.KAPPA_EPS_GENERAL: 1.0,
    KernelKind.EPS_KAPPA_EPS_GENERAL: -1.0,
}


@dataclass_json
@dataclass(frozen=True)
class LimitParams:
    """
    Limit parameters lambda = lim N/s and c = lim (s - N).

    Attributes:
        lam: lambda in [0, 1]; lambda = 0 is handled as its own state
        c: c in (0, inf]; a finite c forces lambda = 1
    """

    lam: float
    c: float = math.inf

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValidationError(f"lambda must lie in [0, 1], got {self.lam}")
        if math.isnan(self.c) or self.c <= 0.0:
            raise ValidationError(f"c must lie in (0, inf], got {self.c}")
        if math.isfinite(self.c) and self.lam != 1.0:
            raise ValidationError(
                f"A finite c={self.c} forces lambda = 1, got {self.lam}"
            )

    @property
    def c_infinite(self) -> bool:
        return math.isinf(self.c)

    @property
    def lam_zero(self) -> bool:
        return self.lam == 0.0

    @property
    def inverse_c(self) -> float:
        return 0.0 if self.c_infinite else 1.0 / self.c

    def s_for(self, n: int) -> float:
        """
        Finite-N exponent s realizing these limit parameters.

        s = N + c for finite c, N / lambda for 0 < lambda < 1,
        N + sqrt(N) for lambda = 1 with c = inf and N (N + 1) for lambda = 0.
        """
        if not self.c_infinite:
            return n + self.c
        if self.lam_zero:
            return float(n * (n + 1))
        if self.lam == 1.0:
            return n + math.sqrt(n)
        return n / self.lam


@dataclass_json
@dataclass(frozen=True)
class ScalingFrame:
    """
    Coordinates of a scaling regime.

    Attributes:
        regime: Exterior, bulk or edge
        center: Bulk center x in (-2, 2)
        edge: Edge point, 2 or -2
    """

    regime: Regime
    center: float = 0.0
    edge: float = 2.0

    def __post_init__(self):
        if not isinstance(self.regime, Regime):
            try:
                object.__setattr__(self, "regime", Regime(self.regime))
            except ValueError:
                raise ValidationError(f"Unknown regime: {self.regime}") from None
        if self.regime is Regime.BULK and not -2.0 < self.center < 2.0:
            raise DomainError(f"Bulk center must lie in (-2, 2), got {self.center}")
        if self.edge not in (2.0, -2.0):
            raise ValidationError(f"Edge point must be 2 or -2, got {self.edge}")

    @property
    def omega(self) -> float:
        """omega(x) = 1 / sqrt(4 - x^2) at the bulk center"""
        return 1.0 / math.sqrt(4.0 - self.center * self.center)

    @property
    def edge_sign(self) -> float:
        return math.copysign(1.0, self.edge)

    def point(self, n: int, a):
        """Finite-N point represented by the scaled coordinate a"""
        a = np.asarray(a, dtype=complex)
        if self.regime is Regime.BULK:
            value = self.center + a / (n * self.omega)
        elif self.regime is Regime.EDGE:
            value = self.edge_sign * (2.0 - a * a / (n * n))
        else:
            value = a
        return value[()] if value.ndim == 0 else value

    def coordinate(self, zeta):
        """
        Scaled coordinate a of a display point zeta.

        Bulk: a = zeta. Edge: zeta = N^2 (z - edge), so a = sqrt(-zeta) at 2
        and sqrt(zeta) at -2. Exterior: a = zeta.
        """
        zeta = np.asarray(zeta, dtype=complex)
        if self.regime is Regime.EDGE:
            return np.sqrt(-self.edge_sign * zeta)
        return zeta

    def weight(self, lp: LimitParams, a):
        """
        Limit of the weight phi at the scaled point a.

        exp(-|Im a| / lambda), which for lambda = 0 is 1 on the real line
        and 0 off it.
        """
        if self.regime is Regime.EXTERIOR:
            raise ValidationError("The exterior regime has no weight limit")
        a = np.asarray(a, dtype=complex)
        return _damping(lp, a)


def _damping(lp: LimitParams, u: np.ndarray) -> np.ndarray:
    if lp.lam_zero:
        return np.where(u.imag == 0, 1.0, 0.0)
    return np.exp(-np.abs(u.imag) / lp.lam)


def _kind(kind: Union[str, KernelKind]) -> KernelKind:
    try:
        return KernelKind(kind)
    except ValueError:
        raise ValidationError(f"Unknown kernel kind: {kind}") from None


def _maybe_real(value: np.ndarray):
    value = np.asarray(value)
    if not np.any(np.imag(value)):
        value = np.real(value)
    return value[()] if value.ndim == 0 else value


def _unit_integral(integrand: Callable, *args):
    """Integrate integrand(*args, t) over t in [0, 1] with the fixed rule"""
    t, w = quadrature.gauss_legendre_nodes(0.0, 1.0, UNIT_ORDER)
    arrays = np.broadcast_arrays(*[np.asarray(x, dtype=complex) for x in args])
    expanded = [x[..., None] for x in arrays]
    return (integrand(*expanded, t) * w).sum(axis=-1)


def _sinc(z: np.ndarray) -> np.ndarray:
    """sin(z) / z, entire"""
    return np.sinc(z / np.pi)


def _require_real(name: str, value) -> None:
    if np.any(np.imag(np.asarray(value, dtype=complex))):
        raise DomainError(f"Argument {name} must be real for this kernel kind")


# ---------------------------------------------------------------------------
# Bulk
# ---------------------------------------------------------------------------


def limit_bulk(lp: LimitParams, kind: Union[str, KernelKind], a, b):
    """
    Bulk scaling limit of a kernel entry.

    complex-K: (1/pi) int (1 - (lam t)^2) cos((conj(b) - a) t) dt
    kappa: (1/pi) int t (1 - (lam t)^2) sin((b - a) t) dt
    kappa-eps: (1/pi) int (1 - (lam t)^2) cos((b - a) t) dt
    eps-kappa-eps: (1/pi) int (1 - (lam t)^2) sin((b - a) t) / t dt

    Args:
        lp: Limit parameters
        kind: Kernel entry
        a, b: Scaled coordinates (real for eps-kappa-eps)

    Returns:
        The limit value(s)
    """
    kind = _kind(kind)
    lam2 = lp.lam * lp.lam

    if kind is KernelKind.COMPLEX:

        def integrand(a, b, t):
            return (1.0 - lam2 * t * t) * np.cos((np.conj(b) - a) * t)

    elif kind is KernelKind.KAPPA:

        def integrand(a, b, t):
            return t * (1.0 - lam2 * t * t) * np.sin((b - a) * t)

    elif kind is KernelKind.KAPPA_EPS:

        def integrand(a, b, t):
            return (1.0 - lam2 * t * t) * np.cos((b - a) * t)

    elif kind is KernelKind.EPS_KAPPA_EPS:
        _require_real("a", a)
        _require_real("b", b)

        def integrand(a, b, t):
            d = b - a
            return (1.0 - lam2 * t * t) * d * _sinc(d * t)

    else:
        raise ValidationError(f"Kernel kind {kind.value} has no bulk limit")

    return _maybe_real(_unit_integral(integrand, a, b) / np.pi)


# ---------------------------------------------------------------------------
# Edge
# ---------------------------------------------------------------------------


def _j0(z):
    return specfun.bessel_j(0.0, z)


def _j1(z):
    return specfun.bessel_j(1.0, z)


def _j1_tilde(z):
    return specfun.tilde_j(1.0, z)


def bessel_pair_11(u, v):
    """J_1(u) v J_0(v) - J_1(v) u J_0(u)"""
    return _j1(u) * v * _j0(v) - _j1(v) * u * _j0(u)


def bessel_pair_12(u, v):
    """J_1(u) v J_1(v) + J_0(v) u J_0(u)"""
    return _j1(u) * v * _j1(v) + _j0(v) * u * _j0(u)


def bessel_pair_22(u, v):
    """u J_1(u) J_0(v) - v J_1(v) J_0(u)"""
    return u * _j1(u) * _j0(v) - v * _j1(v) * _j0(u)


def limit_edge(
    lp: LimitParams,
    kind: Union[str, KernelKind],
    a,
    b,
    spec: Optional[QuadratureSpec] = None,
):
    """
    Edge scaling limit of a kernel entry at the point 2.

    complex-K: 1/(2 pi a conj b) int (1 - (lam t)^2) sin(a t) sin(conj(b) t) dt
    kappa: 1/(8ab) int t (1 - (lam t)^2) J11(at, bt) dt
    kappa-eps: 1/(4a) int (1 - (lam t)^2) J12(at, bt) dt, b real
    eps-kappa-eps: (1/2) int (1 - (lam t)^2) J22(at, bt) / t dt, a and b real

    The general kinds take path ends with real squares and integrate the
    damped Bessel pairs along the segment from 0; they agree with the
    kappa-eps and eps-kappa-eps kinds on the real line.

    Args:
        lp: Limit parameters
        kind: Kernel entry
        a, b: Scaled coordinates
        spec: Settings for the path integrals of the general kinds

    Returns:
        The limit value(s)

    Raises:
        DomainError: On arguments outside the kind's domain
    """
    kind = _kind(kind)
    lam2 = lp.lam * lp.lam

    if kind is KernelKind.COMPLEX:

        def integrand(a, b, t):
            damping = 1.0 - lam2 * t * t
            sincs = _sinc(a * t) * _sinc(np.conj(b) * t)
            return damping * t * t * sincs / (2.0 * np.pi)

    elif kind is KernelKind.KAPPA:

        def integrand(a, b, t):
            pair = _j1_tilde(a * t) * _j0(b * t) - _j0(a * t) * _j1_tilde(b * t)
            return (1.0 - lam2 * t * t) * t**3 * pair / 16.0

    elif kind is KernelKind.KAPPA_EPS:
        _require_real("b", b)

        def integrand(a, b, t):
            inner = (
                0.5 * b * t * _j1_tilde(a * t) * _j1(b * t) + _j0(a * t) * _j0(b * t)
            )
            return (1.0 - lam2 * t * t) * t * inner / 4.0

    elif kind is KernelKind.EPS_KAPPA_EPS:
        _require_real("a", a)
        _require_real("b", b)

        def integrand(a, b, t):
            return 0.5 * (1.0 - lam2 * t * t) * bessel_pair_22(a * t, b * t) / t

    else:
        return _limit_edge_general(lp, kind, a, b, spec or DEFAULT_LIMIT_SPEC)

    return _maybe_real(_unit_integral(integrand, a, b))


def _check_path(lp: LimitParams, name: str, end: np.ndarray) -> None:
    square = end * end
    if np.any(np.abs(square.imag) > PATH_GUARD * np.maximum(1.0, np.abs(square))):
        raise DomainError(f"Path end {name} must have a real square")
    if lp.lam_zero and np.any(end.imag != 0):
        raise DomainError("lambda = 0 has no limit along nonreal paths")


def _path_integrals(
    lp: LimitParams, end: np.ndarray, t: np.ndarray, order: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Damped path integrals from 0 to end.

    P1 = int w(u) J_1(u t) du and P0 = int w(u) u t J_0(u t) du, where
    w(u) = exp(-|Im u| / lambda).
    """
    tau, weights = quadrature.gauss_legendre_nodes(0.0, 1.0, order)
    u = end[..., None] * tau
    ut = u * t[..., None]
    damped = _damping(lp, u) * weights
    p1 = (damped * _j1(ut)).sum(axis=-1) * end
    p0 = (damped * ut * _j0(ut)).sum(axis=-1) * end
    return p1, p0


def _limit_edge_general(
    lp: LimitParams, kind: KernelKind, a, b, spec: QuadratureSpec
):
    a, b = np.broadcast_arrays(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    )
    _check_path(lp, "b", b)
    if kind is KernelKind.EPS_KAPPA_EPS_GENERAL:
        _check_path(lp, "a", a)
    t, w = quadrature.gauss_legendre_nodes(0.0, 1.0, UNIT_ORDER)
    damping = 1.0 - lp.lam * lp.lam * t * t
    a_t, b_t = a[..., None], b[..., None]

    def estimate(level: int) -> np.ndarray:
        order = PATH_ORDER * 2**level
        p1_b, p0_b = _path_integrals(lp, b_t, t, order)
        if kind is KernelKind.KAPPA_EPS_GENERAL:
            at = a_t * t
            bracket = 0.5 * t * _j1_tilde(at) * p0_b - t * _j0(at) * p1_b + _j0(at)
            values = 0.25 * t * damping * bracket
        else:
            p1_a, p0_a = _path_integrals(lp, a_t, t, order)
            bracket = p1_a * p0_b - p1_b * p0_a - (p0_b - p0_a) / t
            values = 0.5 * t * damping * bracket
        return (values * w).sum(axis=-1)

    value = quadrature.refine(estimate, spec, what=f"{kind.value} edge path integral")
    return _maybe_real(value)


# ---------------------------------------------------------------------------
# Exterior
# ---------------------------------------------------------------------------


def _exterior_phi(z) -> Tuple[np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=complex)
    if np.any((np.abs(z.imag) <= CUT_GUARD) & (np.abs(z.real) <= 2.0)):
        raise DomainError("Exterior limits need points off [-2, 2]")
    phi = np.asarray(specfun.joukowski_phi(z), dtype=complex)
    prime = np.asarray(specfun.joukowski_phi_prime(z), dtype=complex)
    return phi, prime


def _root_square_minus_one(u: np.ndarray) -> np.ndarray:
    """sqrt(u^2 - 1), holomorphic off [-1, 1] and asymptotic to u"""
    u = np.where(u.imag == 0, u.real + 0j, u)
    return np.sqrt(u - 1.0) * np.sqrt(u + 1.0)


def limit_exterior_complex(lp: LimitParams, z, w):
    """
    Exterior limit of the rescaled complex kernel.

    ((1 + lam)/(2 pi)) [1 + c^-1 / (P - 1)] Phi'(z) conj(Phi'(w)) / (P - 1)
    with P = Phi(z) conj(Phi(w)); the c^-1 term drops for c = inf.

    Raises:
        DomainError: If a point lies on [-2, 2]
    """
    pz, dz = _exterior_phi(z)
    pw, dw = _exterior_phi(w)
    product = pz * np.conj(pw)
    bracket = 1.0 + lp.inverse_c / (product - 1.0)
    scale = (1.0 + lp.lam) / (2.0 * np.pi)
    value = scale * bracket * dz * np.conj(dw) / (product - 1.0)
    return value[()] if value.ndim == 0 else value


def limit_exterior_complex_diagonal(lp: LimitParams, z):
    """
    Limit of the complex density K(z, z) off [-2, 2] at finite c.

    (1/pi) |Phi|^-2c [c + 1/(|Phi|^2 - 1)] |Phi'|^2 / (|Phi|^2 - 1)
    """
    if lp.c_infinite:
        raise DomainError("The exterior density limit needs a finite c")
    phi, prime = _exterior_phi(z)
    m2 = np.abs(phi) ** 2
    value = m2 ** (-lp.c) * (lp.c + 1.0 / (m2 - 1.0))
    value = value * np.abs(prime) ** 2 / (m2 - 1.0) / np.pi
    return value[()] if value.ndim == 0 else value


def limit_exterior_real(lp: LimitParams, z, w):
    """
    Exterior limit of the rescaled orto-kernel, antisymmetric in (z, w).

    (lam(1 + lam)/(2 pi)) [1 + c^-1/(P - 1)] Phi'(z) Phi'(w) / (P - 1)
    * (Phi(w) - Phi(z)) / (sqrt(Phi(z)^2 - 1) sqrt(Phi(w)^2 - 1)),
    with P = Phi(z) Phi(w).
    """
    pz, dz = _exterior_phi(z)
    pw, dw = _exterior_phi(w)
    product = pz * pw
    bracket = 1.0 + lp.inverse_c / (product - 1.0)
    roots = _root_square_minus_one(pz) * _root_square_minus_one(pw)
    value = (
        lp.lam * (1.0 + lp.lam) / (2.0 * np.pi) * bracket * dz * dw / (product - 1.0)
        * (pw - pz) / roots
    )
    return value[()] if value.ndim == 0 else value


def _signed_root(u: np.ndarray) -> np.ndarray:
    """sqrt(u^2 - 1) for real |u| > 1 on the branch asymptotic to u"""
    return np.sign(u) * np.sqrt(u * u - 1.0)


def _f_kernel(c: float, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """[c + 1/(uv - 1)] |uv|^-c (v - u) / ((uv - 1) sqrt(u^2 - 1) sqrt(v^2 - 1))"""
    uv = u * v
    return (
        (c + 1.0 / (uv - 1.0)) * np.abs(uv) ** (-c) * (v - u)
        / ((uv - 1.0) * _signed_root(u) * _signed_root(v))
    )


def _f_prefactor(c: float) -> float:
    return specfun.gamma_ratio((c + 1.0) / 2.0, c / 2.0) / math.sqrt(math.pi)


def _real_exterior(x: float) -> Tuple[float, float, float]:
    """Phi(x), Phi'(x) and sgn(x) for real |x| > 2"""
    x = float(np.real(x))
    if abs(x) <= 2.0:
        raise DomainError(f"F needs real arguments outside [-2, 2], got {x}")
    phi = float(np.real(specfun.joukowski_phi(x)))
    prime = float(np.real(specfun.joukowski_phi_prime(x)))
    return phi, prime, math.copysign(1.0, x)


def _tail(
    g: Callable, end: float, sign: float, spec: QuadratureSpec, decay: float
) -> float:
    """int_{sign inf}^{end} g(u) du"""
    half_line = quadrature.integrate_semiinfinite(g, end, int(sign), spec, decay=decay)
    return -sign * float(half_line)


def _check_c(c: float) -> None:
    if not 0.0 < c < math.inf:
        raise DomainError(f"F needs a finite c > 0, got {c}")


def limit_exterior_matrix_f(
    c: float, x: float, y: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """
    The function F(x, y) of the exterior matrix kernel.

    F = (1/pi) int int k(u, v) dv du
        + G(c) (sgn(x) T(y) - sgn(y) T(x)),

    T(x) = int_{sgn(x) inf}^{Phi(x)} |u|^-c / sqrt(u^2 - 1) du,

    where both double-integral paths run from sgn(.) inf to Phi(.), G(c) =
    Gamma((c+1)/2) / (sqrt(pi) Gamma(c/2)) and
    k(u, v) = [c + 1/(uv - 1)] |uv|^-c (v - u) / ((uv - 1) sqrt(u^2 - 1) sqrt(v^2 - 1)).

    Args:
        c: Finite limit parameter c > 0
        x, y: Real points outside [-2, 2]
        spec: Settings of the semi-infinite quadratures

    Returns:
        F(x, y), antisymmetric in (x, y)
    """
    _check_c(c)
    spec = spec or DEFAULT_LIMIT_SPEC
    px, _, sx = _real_exterior(x)
    py, _, sy = _real_exterior(y)

    def estimate(level: int) -> np.ndarray:
        u, wu = quadrature.semiinfinite_nodes(px, int(sx), level)
        v, wv = quadrature.semiinfinite_nodes(py, int(sy), level)
        return np.einsum("i,ij,j->", wu, _f_kernel(c, u[:, None], v[None, :]), wv)

    double = sx * sy * float(
        quadrature.refine(estimate, spec, what="F double integral")
    )

    def single(u: np.ndarray) -> np.ndarray:
        return np.abs(u) ** (-c) / _signed_root(u)

    tails = sx * _tail(single, py, sy, spec, c + 1.0) - sy * _tail(
        single, px, sx, spec, c + 1.0
    )
    return double / np.pi + _f_prefactor(c) * tails


def limit_exterior_matrix_f_dx(
    c: float, x: float, y: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """Partial derivative of F in its first argument (real arguments)"""
    _check_c(c)
    spec = spec or DEFAULT_LIMIT_SPEC
    px, dx, _ = _real_exterior(x)
    py, _, sy = _real_exterior(y)
    inner = _tail(lambda v: _f_kernel(c, px, v), py, sy, spec, c + 1.0) / np.pi
    edge = _f_prefactor(c) * sy * abs(px) ** (-c) / float(_signed_root(px))
    return dx * (inner - edge)


def limit_exterior_matrix_f_dy(
    c: float, x: float, y: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """Partial derivative of F in its second argument (real arguments)"""
    _check_c(c)
    spec = spec or DEFAULT_LIMIT_SPEC
    px, _, sx = _real_exterior(x)
    py, dy, _ = _real_exterior(y)
    inner = _tail(lambda u: _f_kernel(c, u, py), px, sx, spec, c + 1.0) / np.pi
    edge = _f_prefactor(c) * sx * abs(py) ** (-c) / float(_signed_root(py))
    return dy * (inner + edge)


def limit_exterior_matrix_f_dxy(c: float, x: float, y: float) -> float:
    """Mixed second derivative (1/pi) Phi'(x) Phi'(y) k(Phi(x), Phi(y))"""
    _check_c(c)
    px, dx, _ = _real_exterior(x)
    py, dy, _ = _real_exterior(y)
    return float(dx * dy * _f_kernel(c, np.float64(px), np.float64(py)) / np.pi)


# ---------------------------------------------------------------------------
# Densities for grids
# ---------------------------------------------------------------------------


def limit_density(
    lp: LimitParams,
    frame: ScalingFrame,
    field: Union[str, Field],
    zeta,
    weighted: bool = True,
) -> np.ndarray:
    """
    Limiting density of complex roots at display points.

    For the complex field this is the kernel diagonal; for the real field
    it is the density R_{0,1} of complex roots, i sgn(Im zeta) times the
    orto-kernel limit at (a, conj a), which vanishes on the real axis.

    Args:
        lp: Limit parameters
        frame: Regime and center
        field: Coefficient field
        zeta: Display points (scaled displacements; plain z outside [-2, 2])
        weighted: Include the weight limits; False gives the weight-stripped kernel

    Returns:
        Real array with the shape of zeta
    """
    field = Field(field)
    zeta = np.asarray(zeta, dtype=complex)
    a = frame.coordinate(zeta)
    sign = np.sign(zeta.imag)

    if frame.regime is Regime.EXTERIOR:
        if lp.c_infinite:
            raise DomainError("The exterior density limit needs a finite c")
        on_cut = (np.abs(zeta.imag) <= CUT_GUARD) & (np.abs(zeta.real) <= 2.0)
        if field is Field.COMPLEX:
            # the density is unbounded at the cut
            safe = np.where(on_cut, 3.0, zeta)
            value = np.asarray(limit_exterior_complex_diagonal(lp, safe), dtype=float)
            return np.where(on_cut, np.nan, value)
        off_axis = zeta.imag != 0
        safe = np.where(off_axis, zeta, 3.0 + 1j)
        kappa = limit_exterior_real(lp, safe, np.conj(safe))
        weight = np.abs(specfun.joukowski_phi(safe)) ** (-2 * lp.c)
        value = 1j * sign * lp.c * weight * kappa
        return np.where(off_axis, np.real(value), 0.0)

    weights = frame.weight(lp, a) ** 2 if weighted else 1.0
    if field is Field.COMPLEX:
        limit = limit_bulk if frame.regime is Regime.BULK else limit_edge
        values = weights * limit(lp, KernelKind.COMPLEX, a, a)
        return np.asarray(np.real(values), dtype=float)

    if frame.regime is Regime.BULK:
        kappa = limit_bulk(lp, KernelKind.KAPPA, a, np.conj(a))
    else:
        reflection = EDGE_REFLECTION_SIGN[KernelKind.KAPPA] if frame.edge < 0 else 1.0
        kappa = reflection * limit_edge(lp, KernelKind.KAPPA, a, np.conj(a))
    return np.asarray(np.real(1j * sign * weights * kappa), dtype=float)


# ---------------------------------------------------------------------------
# Convergence harness
# ---------------------------------------------------------------------------


class Target(str, Enum):
    """A finite-N rescaling paired with its limit"""

    BULK_COMPLEX = "bulk-complex"
    BULK_KAPPA = "bulk-kappa"
    BULK_KAPPA_EPS = "bulk-kappa-eps"
    BULK_EPS_KAPPA_EPS = "bulk-eps-kappa-eps"
    EDGE_COMPLEX = "edge-complex"
    EDGE_KAPPA = "edge-kappa"
    EDGE_KAPPA_EPS = "edge-kappa-eps"
    EDGE_EPS_KAPPA_EPS = "edge-eps-kappa-eps"
    EXTERIOR_COMPLEX = "exterior-complex"
    EXTERIOR_COMPLEX_DIAGONAL = "exterior-complex-diagonal"
    EXTERIOR_REAL = "exterior-real"
    EXTERIOR_KAPPA_EPS = "exterior-kappa-eps"
    EXTERIOR_F = "exterior-f"

    @property
    def regime(self) -> Regime:
        return Regime(self.value.split("-", 1)[0])

    @property
    def field(self) -> Field:
        if self in (Target.BULK_COMPLEX, Target.EDGE_COMPLEX) or self.value.startswith(
            "exterior-complex"
        ):
            return Field.COMPLEX
        return Field.REAL

    @property
    def kind(self) -> Optional[KernelKind]:
        if self.regime is Regime.EXTERIOR:
            return None
        name = self.value.split("-", 1)[1]
        return KernelKind.COMPLEX if name == "complex" else KernelKind(name)


@dataclass
class ConvergenceRow:
    """One finite-N comparison"""

    n: int
    s: float
    regime: str
    point: str
    value: complex
    limit: complex
    error: float


def _check_sequence(n_values: Sequence[int], field: Field) -> List[int]:
    values = [int(n) for n in n_values]
    if not values:
        raise ValidationError("The N sequence is empty")
    if any(n < 1 for n in values) or any(b <= a for a, b in zip(values, values[1:])):
        raise ValidationError(
            f"The N sequence must be strictly increasing, got {values}"
        )
    if field is Field.REAL and any(n % 2 for n in values):
        raise ValidationError("Real-ensemble targets need even N")
    return values


def _point_label(a: complex, b: complex) -> str:
    return f"({a!r};{b!r})"


def _limit_value(
    target: Target, lp: LimitParams, frame: ScalingFrame, a: complex, b: complex, spec
) -> complex:
    regime = target.regime
    if regime is Regime.BULK:
        return limit_bulk(lp, target.kind, a, b)
    if regime is Regime.EDGE:
        sign = EDGE_REFLECTION_SIGN[target.kind] if frame.edge < 0 else 1.0
        return sign * limit_edge(lp, target.kind, a, b, spec)
    if target is Target.EXTERIOR_COMPLEX:
        return limit_exterior_complex(lp, a, b)
    if target is Target.EXTERIOR_COMPLEX_DIAGONAL:
        return limit_exterior_complex_diagonal(lp, a)
    if target is Target.EXTERIOR_REAL:
        return limit_exterior_real(lp, a, b)
    if target is Target.EXTERIOR_KAPPA_EPS:
        return -limit_exterior_matrix_f_dx(lp.c, a.real, b.real, spec)
    return limit_exterior_matrix_f(lp.c, a.real, b.real, spec)


def _finite_value(
    target: Target,
    params: EnsembleParams,
    basis: Optional[SkewBasis],
    frame: ScalingFrame,
    a: complex,
    b: complex,
) -> complex:
    n, s = params.n, params.s
    if target.regime is not Regime.EXTERIOR:
        z, w = frame.point(n, a), frame.point(n, b)
    omega = frame.omega if target.regime is Regime.BULK else 1.0

    if target is Target.BULK_COMPLEX:
        return complex_kernel.kernel_tilde(params, z, w) / (s * n * omega**2)
    if target is Target.BULK_KAPPA:
        return real_kernel.kappa_tilde(basis, z, w) / (n * n * omega**2)
    if target is Target.BULK_KAPPA_EPS:
        return real_kernel.kappa_eps_tilde(basis, z, w.real) / (n * omega)
    if target in (Target.BULK_EPS_KAPPA_EPS, Target.EDGE_EPS_KAPPA_EPS):
        return real_kernel.eps_kappa_eps(basis, z.real, w.real)
    if target is Target.EDGE_COMPLEX:
        return complex_kernel.kernel_tilde(params, z, w) / (s * n**3)
    if target is Target.EDGE_KAPPA:
        return real_kernel.kappa_tilde(basis, z, w) / n**4
    if target is Target.EDGE_KAPPA_EPS:
        return real_kernel.kappa_eps_tilde(basis, z, w.real) / (n * n)
    if target is Target.EXTERIOR_COMPLEX:
        return complex_kernel.exterior_rescaled(params, a, b)
    if target is Target.EXTERIOR_COMPLEX_DIAGONAL:
        return complex_kernel.density(params, a)
    if target is Target.EXTERIOR_REAL:
        return real_kernel.exterior_rescaled_real(basis, a, b)
    if target is Target.EXTERIOR_KAPPA_EPS:
        # (|Phi(x)| / Phi(x))^N = 1 for real x and even N
        return real_kernel.kappa_eps(basis, a.real, b.real)
    return real_kernel.eps_kappa_eps(basis, a.real, b.real)


def _check_target(
    target: Target, lp: LimitParams, points: Sequence[Tuple[complex, complex]]
):
    needs_real = {
        Target.BULK_KAPPA_EPS: ("b",),
        Target.EDGE_KAPPA_EPS: ("b",),
        Target.BULK_EPS_KAPPA_EPS: ("a", "b"),
        Target.EDGE_EPS_KAPPA_EPS: ("a", "b"),
        Target.EXTERIOR_KAPPA_EPS: ("a", "b"),
        Target.EXTERIOR_F: ("a", "b"),
    }.get(target, ())
    for a, b in points:
        for name in needs_real:
            _require_real(name, a if name == "a" else b)
    if target in (
        Target.EXTERIOR_COMPLEX_DIAGONAL,
        Target.EXTERIOR_KAPPA_EPS,
        Target.EXTERIOR_F,
    ):
        if lp.c_infinite:
            raise ValidationError(f"Target {target.value} needs a finite c")


def converge(
    target: Union[str, Target],
    n_values: Sequence[int],
    lp: LimitParams,
    points: Sequence[Tuple[complex, complex]],
    frame: Optional[ScalingFrame] = None,
    spec: Optional[QuadratureSpec] = None,
    threads: Optional[int] = None,
) -> List[ConvergenceRow]:
    """
    Compare rescaled finite-N kernels with their limits.

    For each N, s is chosen by lp.s_for(N); every point pair (a, b) is
    mapped through the frame to finite-N points and the rescaled kernel is
    compared with the limit. Exterior targets take the points z, w directly;
    the diagonal target uses only a.

    Args:
        target: Which rescaling and limit
        n_values: Strictly increasing N sequence
        lp: Limit parameters
        points: Scaled point pairs
        frame: Scaling frame for bulk and edge targets (default center 0 / edge 2)
        spec: Quadrature settings for the limits that need them
        threads: Worker cap (default from the environment)

    Returns:
        Rows ordered by N, then by point

    Raises:
        ValidationError: On a non-monotone sequence or a target mismatch
    """
    try:
        target = Target(target)
    except ValueError:
        raise ValidationError(f"Unknown convergence target: {target}") from None
    frame = frame or ScalingFrame(target.regime)
    if frame.regime is not target.regime:
        raise ValidationError(
            f"Target {target.value} does not belong to the {frame.regime.value} regime"
        )
    values = _check_sequence(n_values, target.field)
    points = [(complex(a), complex(b)) for a, b in points]
    if not points:
        raise ValidationError("No points to compare")
    _check_target(target, lp, points)
    spec = spec or DEFAULT_LIMIT_SPEC

    limits = [_limit_value(target, lp, frame, a, b, spec) for a, b in points]

    def rows_for(n: int) -> List[ConvergenceRow]:
        params = EnsembleParams(n=n, s=lp.s_for(n), field=target.field)
        basis = SkewBasis(params) if target.field is Field.REAL else None
        rows = []
        for (a, b), limit in zip(points, limits):
            value = complex(_finite_value(target, params, basis, frame, a, b))
            error = abs(value - complex(limit))
            rows.append(
                ConvergenceRow(
                    n=n,
                    s=params.s,
                    regime=target.value,
                    point=_point_label(a, b),
                    value=value,
                    limit=complex(limit),
                    error=error,
                )
            )
        worst = max(r.error for r in rows)
        logger.debug(f"{target.value}: N={n} sup error {worst:.3e}")
        return rows

    table = map_ordered(rows_for, values, threads)
    return [row for rows in table for row in rows]


def sup_errors(rows: Sequence[ConvergenceRow]) -> Dict[int, float]:
    """Largest error per N"""
    result: Dict[int, float] = {}
    for row in rows:
        result[row.n] = max(result.get(row.n, 0.0), row.error)
    return result
