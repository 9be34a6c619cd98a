"""
Regions and Grids

This module defines the planar and real regions used for expected counts
and empirical statistics, and the rectangular lattices used for density
grids. Each region knows its indicator, its mirror image across the real
axis and how to integrate a vectorized integrand over itself.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from ..numerics import quadrature
from ..numerics.quadrature import QuadratureSpec
from .errors import ValidationError

# Break points where the weight stops being analytic
CUT_ENDPOINTS = (-2.0, 2.0)


def _x_breaks(lo: float, hi: float) -> List[float]:
    return [lo] + [x for x in CUT_ENDPOINTS if lo < x < hi] + [hi]


class Region:
    """Base class for integration and counting regions"""

    kind = "region"

    def contains(self, z) -> np.ndarray:
        raise NotImplementedError

    def reflect(self) -> "Region":
        raise NotImplementedError

    @property
    def is_empty(self) -> bool:
        return False

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec):
        """Integrate a vectorized integrand over the region"""
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}


@dataclass
class Rectangle(Region):
    """Closed rectangle [x0, x1] x [y0, y1]"""

    x0: float
    x1: float
    y0: float
    y1: float
    kind = "rectangle"

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValidationError(f"Rectangle limits out of order: {self}")

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return (
            (z.real >= self.x0)
            & (z.real <= self.x1)
            & (z.imag >= self.y0)
            & (z.imag <= self.y1)
        )

    def reflect(self) -> "Rectangle":
        return Rectangle(self.x0, self.x1, -self.y1, -self.y0)

    @property
    def is_empty(self) -> bool:
        return self.x1 == self.x0 or self.y1 == self.y0

    def integrate(self, f, spec):
        if self.is_empty:
            return 0.0
        return quadrature.integrate_box(
            f, _x_breaks(self.x0, self.x1), [self.y0, self.y1], spec
        )

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "x0": self.x0,
            "x1": self.x1,
            "y0": self.y0,
            "y1": self.y1,
        }


@dataclass
class Disk(Region):
    """Closed disk |z - center| <= radius"""

    center: complex
    radius: float
    kind = "disk"

    def __post_init__(self):
        self.center = complex(self.center)
        if self.radius < 0:
            raise ValidationError(f"Disk radius must be nonnegative, got {self.radius}")

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z, dtype=complex) - self.center) <= self.radius

    def reflect(self) -> "Disk":
        return Disk(self.center.conjugate(), self.radius)

    @property
    def is_empty(self) -> bool:
        return self.radius == 0

    def integrate(self, f, spec):
        if self.is_empty:
            return 0.0
        cx, cy, r = self.center.real, self.center.imag, self.radius

        def half_height(x):
            return np.sqrt(np.maximum(r * r - (x - cx) ** 2, 0.0))

        return quadrature.integrate_graph_region(
            f,
            _x_breaks(cx - r, cx + r),
            lambda x: cy - half_height(x),
            lambda x: cy + half_height(x),
            spec,
            what="disk integral",
        )

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
        }


@dataclass
class Annulus(Region):
    """Closed annulus inner <= |z - center| <= outer"""

    center: complex
    inner: float
    outer: float
    kind = "annulus"

    def __post_init__(self):
        self.center = complex(self.center)
        if not 0 <= self.inner <= self.outer:
            raise ValidationError(
                f"Annulus radii out of order: {self.inner}, {self.outer}"
            )

    def contains(self, z) -> np.ndarray:
        d = np.abs(np.asarray(z, dtype=complex) - self.center)
        return (d >= self.inner) & (d <= self.outer)

    def reflect(self) -> "Annulus":
        return Annulus(self.center.conjugate(), self.inner, self.outer)

    @property
    def is_empty(self) -> bool:
        return self.inner == self.outer

    def integrate(self, f, spec):
        if self.is_empty:
            return 0.0
        outer = Disk(self.center, self.outer).integrate(f, spec)
        inner = Disk(self.center, self.inner).integrate(f, spec)
        return outer - inner

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "center": [self.center.real, self.center.imag],
            "inner": self.inner,
            "outer": self.outer,
        }


@dataclass
class WholePlane(Region):
    """The complex plane"""

    kind = "whole-plane"

    def contains(self, z) -> np.ndarray:
        return np.ones(np.shape(z), dtype=bool)

    def reflect(self) -> "WholePlane":
        return WholePlane()

    def integrate(self, f, spec):
        upper = quadrature.integrate_halfplane(f, spec)
        lower = quadrature.integrate_halfplane(lambda z: f(np.conj(z)), spec)
        return upper + lower


@dataclass
class RealInterval(Region):
    """Closed real interval [a, b], possibly unbounded; holds real points only"""

    a: float
    b: float
    kind = "interval"

    def __post_init__(self):
        if self.b < self.a:
            raise ValidationError(f"Interval limits out of order: [{self.a}, {self.b}]")

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return (z.imag == 0) & (z.real >= self.a) & (z.real <= self.b)

    def reflect(self) -> "RealInterval":
        return RealInterval(self.a, self.b)

    @property
    def is_empty(self) -> bool:
        return self.a == self.b

    def integrate(self, f, spec):
        """Integrate f(x) dx along the interval, split at -2 and 2"""
        if self.is_empty:
            return 0.0
        lo = min(self.b, -2.0) if math.isinf(self.a) else self.a
        hi = max(self.a, 2.0) if math.isinf(self.b) else self.b
        if math.isinf(self.a) and math.isinf(self.b):
            lo, hi = -2.0, 2.0
        total = 0.0
        if hi > lo:
            total = quadrature.integrate_panels(f, _x_breaks(lo, hi), spec)
        if math.isinf(self.a):
            total = total + quadrature.integrate_semiinfinite(f, lo, -1, spec)
        if math.isinf(self.b):
            total = total + quadrature.integrate_semiinfinite(f, hi, 1, spec)
        return total

    def describe(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b}


def parse_region(text: str) -> Region:
    """
    Parse a region description.

    Formats: "disk:cx,cy,r", "annulus:cx,cy,r_in,r_out",
    "rect:x0,x1,y0,y1", "interval:a,b" (inf allowed) and "plane".
    """
    kind, _, rest = text.strip().partition(":")
    try:
        values = [float(v) for v in rest.split(",")] if rest else []
    except ValueError:
        raise ValidationError(f"Invalid region: {text}") from None
    shapes = {"disk": 3, "annulus": 4, "rect": 4, "interval": 2, "plane": 0}
    if kind not in shapes or len(values) != shapes[kind]:
        raise ValidationError(f"Invalid region: {text}")
    if kind == "disk":
        return Disk(complex(values[0], values[1]), values[2])
    if kind == "annulus":
        return Annulus(complex(values[0], values[1]), values[2], values[3])
    if kind == "rect":
        return Rectangle(*values)
    if kind == "interval":
        return RealInterval(*values)
    return WholePlane()


@dataclass_json
@dataclass
class GridSpec:
    """Rectangular lattice [x0, x1] x [y0, y1] with nx by ny points"""

    x0: float
    x1: float
    y0: float
    y1: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValidationError(f"Grid needs at least one point per axis: {self}")
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise ValidationError(f"Grid limits out of order: {self}")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse "x0,x1,y0,y1,nx,ny" """
        parts = [p for p in (text or "").split(",") if p.strip()]
        if len(parts) != 6:
            raise ValidationError(f"Grid spec must be x0,x1,y0,y1,nx,ny, got '{text}'")
        try:
            x0, x1, y0, y1 = (float(p) for p in parts[:4])
            nx, ny = (int(p) for p in parts[4:])
        except ValueError:
            raise ValidationError(f"Invalid grid spec '{text}'") from None
        return cls(x0, x1, y0, y1, nx, ny)

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        xs = np.linspace(self.x0, self.x1, self.nx)
        ys = np.linspace(self.y0, self.y1, self.ny)
        return xs, ys

    def points(self) -> np.ndarray:
        """Lattice points in row-major order: y outer, x inner"""
        xs, ys = self.axes()
        return (xs[None, :] + 1j * ys[:, None]).ravel()
