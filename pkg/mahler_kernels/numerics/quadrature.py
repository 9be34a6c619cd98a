"""
Quadrature Rules

This module implements the integration rules used by the kernels: refined
tanh-sinh and Gauss-Legendre rules on intervals, a mapped rule for
half-lines, tensor rules over planar regions bounded by graphs, and the
upper half-plane rule built from the exterior map coordinates.

Integrands are vectorized. They receive a 1-D array of nodes and return an
array whose last axis runs over the nodes; any leading axes are a family of
integrands that is integrated simultaneously.
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from dataclasses_json import dataclass_json
from scipy.special import roots_legendre

from ..core.errors import ConvergenceError, DomainError, ValidationError

logger = logging.getLogger("mahler_kernels.quadrature")

# Rule kinds
TANH_SINH = "tanh-sinh"
GAUSS_LEGENDRE = "gauss-legendre"
RULE_KINDS = (TANH_SINH, GAUSS_LEGENDRE)

# Tanh-sinh layout: step h = INITIAL_STEP / 2**level on [-T_MAX, T_MAX]
INITIAL_STEP = 0.5
T_MAX = 3.5
MIN_LEVELS = 3

# Mapped rules drop nodes farther than this from the finite endpoint
MAX_OFFSET = 1e30

# Gauss-Legendre refinement starts from this order and doubles
INITIAL_GL_ORDER = 16
MAX_GL_ORDER = 4096

# Default absolute tolerance of every refinement
DEFAULT_TOLERANCE = 1e-10

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass_json
@dataclass
class QuadratureSpec:
    """Integration settings shared by every quadrature entry point"""

    rule: str = TANH_SINH
    tol: float = DEFAULT_TOLERANCE
    truncation_radius: Optional[float] = None
    max_levels: int = 8

    def __post_init__(self):
        if self.rule not in RULE_KINDS:
            raise ValidationError(f"Unknown quadrature rule: {self.rule}")
        if not self.tol > 0:
            raise ValidationError(f"Tolerance must be positive, got {self.tol}")
        if self.max_levels < MIN_LEVELS:
            raise ValidationError(f"max_levels must be at least {MIN_LEVELS}")
        if self.truncation_radius is not None and self.truncation_radius <= 4.0:
            raise ValidationError("Truncation radius must exceed 4")

    def with_tail_radius(self, s: float, degree: int) -> "QuadratureSpec":
        """Copy truncated where the half-plane tail bound drops below tol / 10"""
        radius = choose_truncation_radius(s, degree, self.tol)
        return replace(self, truncation_radius=radius)


@lru_cache(maxsize=32)
def tanh_sinh_reference(level: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Reference tanh-sinh rule on [-1, 1] at a refinement level.

    Args:
        level: Refinement level, step INITIAL_STEP / 2**level

    Returns:
        (lower, upper, weights): distances of each node to -1 and to +1,
        computed without cancellation, and the weights
    """
    h = INITIAL_STEP / 2**level
    count = int(round(T_MAX / h))
    t = h * np.arange(-count, count + 1)
    s = 0.5 * np.pi * np.sinh(t)
    # 1 - tanh(|s|) = 2 / (exp(2|s|) + 1)
    complement = 2.0 / (np.exp(2.0 * np.abs(s)) + 1.0)
    lower = np.where(s < 0, complement, 2.0 - complement)
    upper = np.where(s < 0, 2.0 - complement, complement)
    weights = h * 0.5 * np.pi * np.cosh(t) / np.cosh(s) ** 2
    keep = (lower > 0) & (upper > 0) & (weights > 0)
    return lower[keep], upper[keep], weights[keep]


def tanh_sinh_nodes(a: float, b: float, level: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tanh-sinh nodes and weights on [a, b].

    Nodes that round onto an endpoint are dropped, so integrands with
    integrable endpoint singularities are never evaluated there.

    Args:
        a: Lower limit
        b: Upper limit
        level: Refinement level

    Returns:
        (nodes, weights)
    """
    lower, upper, weights = tanh_sinh_reference(level)
    half = 0.5 * (b - a)
    nodes = np.where(lower < upper, a + half * lower, b - half * upper)
    keep = (nodes != a) & (nodes != b)
    return nodes[keep], (half * weights)[keep]


@lru_cache(maxsize=16)
def gauss_legendre_reference(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]"""
    nodes, weights = roots_legendre(order)
    return nodes, weights


def gauss_legendre_nodes(
    a: float, b: float, order: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [a, b]"""
    nodes, weights = gauss_legendre_reference(order)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * nodes, half * weights


def _apply(f: Integrand, nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Evaluate a vectorized integrand and contract its node axis"""
    values = np.asarray(f(nodes))
    if values.ndim == 0:
        values = np.broadcast_to(values, nodes.shape)
    return (values * weights).sum(axis=-1)


def refine(
    estimate: Callable[[int], np.ndarray],
    spec: QuadratureSpec,
    what: str = "integral",
):
    """
    Drive a sequence of refinement levels until two successive estimates agree.

    Args:
        estimate: Callable returning the estimate at a level
        spec: Quadrature settings (tolerance and level cap)
        what: Description used in log and error messages

    Returns:
        The last estimate (scalar or array)

    Raises:
        ConvergenceError: If the level cap is reached first
    """
    previous = None
    error = math.inf
    for level in range(spec.max_levels):
        current = np.asarray(estimate(level))
        if previous is not None:
            error = float(np.max(np.abs(current - previous), initial=0.0))
            scale = max(1.0, float(np.max(np.abs(current), initial=0.0)))
            logger.debug(f"{what}: level {level}, error estimate {error:.3e}")
            if level + 1 >= MIN_LEVELS and error <= spec.tol * scale:
                return current[()] if current.ndim == 0 else current
        previous = current
    raise ConvergenceError(
        f"{what} did not converge in {spec.max_levels} levels",
        achieved_error=error,
        levels=spec.max_levels,
    )


def integrate_interval(f: Integrand, a: float, b: float, spec: QuadratureSpec):
    """
    Integrate f over the finite interval [a, b].

    Args:
        f: Vectorized integrand
        a: Lower limit
        b: Upper limit
        spec: Quadrature settings

    Returns:
        The integral (array-valued for integrand families)
    """
    if a == b:
        return _apply(f, np.array([a]), np.zeros(1))
    if spec.rule == GAUSS_LEGENDRE:

        def estimate(level: int) -> np.ndarray:
            order = min(INITIAL_GL_ORDER * 2**level, MAX_GL_ORDER)
            return _apply(f, *gauss_legendre_nodes(a, b, order))

    else:

        def estimate(level: int) -> np.ndarray:
            return _apply(f, *tanh_sinh_nodes(a, b, level))

    return refine(estimate, spec, what=f"integral over [{a}, {b}]")


def integrate_panels(f: Integrand, breaks: Sequence[float], spec: QuadratureSpec):
    """Integrate f over consecutive panels between sorted break points"""
    breaks = sorted(set(float(b) for b in breaks))
    lo, hi = breaks[0], breaks[-1]

    def estimate(level: int) -> np.ndarray:
        nodes, weights = _panel_nodes(breaks, level)
        return _apply(f, nodes, weights)

    return refine(estimate, spec, what=f"integral over [{lo}, {hi}]")


def _panel_nodes(breaks: Sequence[float], level: int) -> Tuple[np.ndarray, np.ndarray]:
    parts = [tanh_sinh_nodes(a, b, level) for a, b in zip(breaks[:-1], breaks[1:])]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def semiinfinite_nodes(
    a: float, direction: int, level: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights for the half-line from a towards direction * infinity.

    The map x = a + direction * t / (1 - t) sends t in (0, 1) onto the half
    line; the tanh-sinh rule in t clusters nodes at both ends.
    """
    lower, upper, weights = tanh_sinh_reference(level)
    keep = lower <= MAX_OFFSET * upper
    lower, upper, weights = lower[keep], upper[keep], weights[keep]
    # t = lower / 2 and 1 - t = upper / 2
    nodes = a + direction * lower / upper
    w = 0.5 * weights * 4.0 / (upper * upper)
    return nodes, w


def integrate_semiinfinite(
    f: Integrand,
    a: float,
    direction: int,
    spec: QuadratureSpec,
    decay: Optional[float] = None,
):
    """
    Integrate f from a to direction * infinity.

    Args:
        f: Vectorized integrand decaying like |x|^-decay
        a: Finite endpoint
        direction: +1 for (a, inf), -1 for (-inf, a)
        spec: Quadrature settings
        decay: Optional decay exponent of f; must exceed 1 when given

    Returns:
        The integral over the half-line with the usual positive orientation
    """
    if direction not in (1, -1):
        raise DomainError(f"Direction must be +1 or -1, got {direction}")
    if decay is not None and decay <= 1.0:
        raise DomainError(f"Integrand decay exponent {decay} is not integrable")
    if spec.truncation_radius is not None:
        end = a + direction * spec.truncation_radius
        value = integrate_interval(f, min(a, end), max(a, end), spec)
        return value

    def estimate(level: int) -> np.ndarray:
        return _apply(f, *semiinfinite_nodes(a, direction, level))

    return refine(estimate, spec, what=f"integral from {a} to {direction:+d}*inf")


def integrate_real_line(f: Integrand, spec: QuadratureSpec, split: float = 0.0):
    """Integrate f over the whole real line, split at a point"""
    left = integrate_semiinfinite(f, split, -1, spec)
    right = integrate_semiinfinite(f, split, 1, spec)
    return left + right


def graph_region_nodes(
    x_breaks: Sequence[float],
    y_lower: Callable[[np.ndarray], np.ndarray],
    y_upper: Callable[[np.ndarray], np.ndarray],
    level: int,
    y_split: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tensor nodes for {x in panels, y_lower(x) <= y <= y_upper(x)}.

    Each vertical segment is split at y_split when it crosses it, so an
    integrand with a kink along that line is smooth on every panel.

    Returns:
        (complex nodes z = x + iy, weights)
    """
    x, wx = _panel_nodes(x_breaks, level)
    lo = np.asarray(y_lower(x), dtype=float) * np.ones_like(x)
    hi = np.asarray(y_upper(x), dtype=float) * np.ones_like(x)
    mid = np.clip(y_split, lo, hi)

    lower, upper, wu = tanh_sinh_reference(level)
    zs = []
    ws = []
    for a, b in ((lo, mid), (mid, hi)):
        half = 0.5 * (b - a)
        y = np.where(
            lower[None, :] < upper[None, :],
            a[:, None] + half[:, None] * lower[None, :],
            b[:, None] - half[:, None] * upper[None, :],
        )
        w = wx[:, None] * half[:, None] * wu[None, :]
        zs.append((x[:, None] + 1j * y).ravel())
        ws.append(w.ravel())
    z = np.concatenate(zs)
    w = np.concatenate(ws)
    keep = w > 0
    return z[keep], w[keep]


def integrate_graph_region(
    f: Integrand,
    x_breaks: Sequence[float],
    y_lower: Callable[[np.ndarray], np.ndarray],
    y_upper: Callable[[np.ndarray], np.ndarray],
    spec: QuadratureSpec,
    what: str = "planar integral",
):
    """
    Integrate f(z) dA over a region bounded by two graphs y_lower <= y <= y_upper.

    Args:
        f: Vectorized integrand of complex nodes
        x_breaks: Sorted x break points (outer limits included)
        y_lower: Lower boundary as a function of x
        y_upper: Upper boundary as a function of x
        spec: Quadrature settings

    Returns:
        The integral
    """
    breaks = sorted(set(float(b) for b in x_breaks))

    def estimate(level: int) -> np.ndarray:
        return _apply(f, *graph_region_nodes(breaks, y_lower, y_upper, level))

    return refine(estimate, spec, what=what)


def integrate_box(
    f: Integrand,
    x_breaks: Sequence[float],
    y_breaks: Sequence[float],
    spec: QuadratureSpec,
):
    """
    Integrate f(z) dA over a rectangle given by x and y break points.

    Each horizontal strip between consecutive y breaks is integrated
    separately; strips crossing the real axis are also split there.
    """
    y_breaks = sorted(set(float(b) for b in y_breaks))
    total = 0.0
    for a, b in zip(y_breaks[:-1], y_breaks[1:]):
        total = total + integrate_graph_region(
            f, x_breaks, _constant(a), _constant(b), spec, what="box integral"
        )
    return total


def _constant(value: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.full_like(x, value, dtype=float)


def halfplane_nodes(level: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights for the open upper half-plane.

    Uses z = u + 1/u with u = exp(i theta) / t, t in (0, 1), theta in (0, pi),
    a conformal parametrization of the upper half-plane. The area element is
    |1 - t^2 exp(-2 i theta)|^2 t^-3 dt dtheta; the segment [-2, 2] and
    infinity correspond to the edges t = 1 and t = 0.
    """
    t, wt = tanh_sinh_nodes(0.0, 1.0, level)
    keep = t >= 1.0 / MAX_OFFSET
    t, wt = t[keep], wt[keep]
    theta, wtheta = tanh_sinh_nodes(0.0, np.pi, level)
    tt = t[:, None]
    u = np.exp(1j * theta)[None, :] / tt
    z = u + 1.0 / u
    jac = np.abs(1.0 - tt * tt * np.exp(-2j * theta)[None, :]) ** 2 / tt**3
    w = wt[:, None] * wtheta[None, :] * jac
    return z.ravel(), w.ravel()


def halfplane_truncation_panels(radius: float) -> Tuple[List[float], List[float]]:
    """x and y break points of the truncated rectangle [-R, R] x (0, R]"""
    xs = [-radius, radius]
    ys = [0.0, radius]
    scale = 2.0
    while scale < radius:
        xs.extend([-scale, scale])
        ys.append(scale / 2.0)
        scale *= 2.0
    ys.append(1.0)
    xs = sorted(set(x for x in xs if -radius <= x <= radius))
    ys = sorted(set(y for y in ys if 0.0 <= y <= radius))
    return xs, ys


def integrate_halfplane(f: Integrand, spec: QuadratureSpec):
    """
    Integrate f(z) dA over the upper half-plane.

    Without a truncation radius the exterior map rule covers the whole half
    plane. With one, a panelled tensor rule on [-R, R] x (0, R] is used and
    the neglected tail is bounded by halfplane_tail_bound; see
    QuadratureSpec.with_tail_radius.

    Args:
        f: Vectorized integrand of complex nodes
        spec: Quadrature settings

    Returns:
        The integral
    """
    if spec.truncation_radius is not None:
        xs, ys = halfplane_truncation_panels(spec.truncation_radius)
        total = 0.0
        for a, b in zip(ys[:-1], ys[1:]):
            total = total + integrate_graph_region(
                f, xs, _constant(a), _constant(b), spec, what="half-plane strip"
            )
        return total

    def estimate(level: int) -> np.ndarray:
        return _apply(f, *halfplane_nodes(level))

    return refine(estimate, spec, what="half-plane integral")


def halfplane_tail_bound(s: float, degree: int, radius: float) -> float:
    """
    Bound the half-plane integral of |z|^(2 degree) |Phi(z)|^(-2 s) beyond radius.

    Uses |Phi(z)| >= |z| / 2 for |z| >= 4.
    """
    if radius < 4.0:
        raise DomainError("Tail bound needs radius >= 4")
    exponent = 2.0 * s - 2.0 * degree - 2.0
    if exponent <= 0:
        return math.inf
    log_bound = (
        math.log(math.pi)
        + 2.0 * s * math.log(2.0)
        - exponent * math.log(radius)
        - math.log(exponent)
    )
    return math.exp(log_bound)


def choose_truncation_radius(s: float, degree: int, tol: float) -> float:
    """Smallest power-of-two radius above 4 whose tail bound is below tol / 10"""
    radius = 8.0
    while halfplane_tail_bound(s, degree, radius) >= tol / 10.0:
        radius *= 2.0
        if radius > 1e12:
            raise DomainError("No finite truncation radius meets the tolerance")
    return radius
