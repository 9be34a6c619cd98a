"""Tests for regions and grids"""

import math

import numpy as np
import pytest

from mahler_kernels.core.errors import ValidationError
from mahler_kernels.core.geometry import (
    Annulus,
    Disk,
    GridSpec,
    RealInterval,
    Rectangle,
    WholePlane,
    parse_region,
)


def ones(z):
    return np.ones(np.shape(z))


def gaussian(z):
    return np.exp(-np.abs(z) ** 2)


class TestRegions:
    def test_rectangle(self, spec):
        rect = Rectangle(0.0, 1.0, 0.5, 2.0)
        assert rect.contains(0.5 + 1.0j)
        assert not rect.contains(0.5 - 1.0j)
        assert rect.reflect() == Rectangle(0.0, 1.0, -2.0, -0.5)
        assert rect.integrate(ones, spec) == pytest.approx(1.5, abs=1e-12)

    def test_disk(self, loose_spec):
        disk = Disk(1.0 + 1.0j, 1.0)
        assert disk.contains(1.5 + 1.5j)
        assert disk.reflect().center == 1.0 - 1.0j
        area = Disk(0.0, 1.0).integrate(ones, loose_spec)
        assert area == pytest.approx(math.pi, rel=1e-6)

    def test_annulus(self, loose_spec):
        annulus = Annulus(0.0, 1.0, 2.0)
        assert annulus.contains(1.5)
        assert not annulus.contains(0.5)
        area = annulus.integrate(ones, loose_spec)
        assert area == pytest.approx(3.0 * math.pi, rel=1e-6)

    def test_whole_plane(self, spec):
        plane = WholePlane()
        assert np.all(plane.contains(np.array([0.0, 1e6j])))
        assert plane.integrate(gaussian, spec) == pytest.approx(math.pi, abs=1e-8)

    def test_real_interval(self, spec):
        line = RealInterval(-math.inf, math.inf)
        assert line.integrate(lambda x: np.exp(-(x**2)), spec) == pytest.approx(
            math.sqrt(math.pi), abs=1e-10
        )
        half = RealInterval(0.0, math.inf)
        value = half.integrate(lambda x: np.exp(-x), spec)
        assert value == pytest.approx(1.0, abs=1e-10)

    def test_real_interval_holds_real_points_only(self):
        interval = RealInterval(-2.0, 2.0)
        assert interval.contains(1.0)
        assert not interval.contains(1.0 + 1e-3j)

    def test_empty_regions(self, spec):
        empty = (Disk(0.0, 0.0), Rectangle(0.0, 0.0, 0.0, 1.0), RealInterval(1.0, 1.0))
        for region in empty:
            assert region.is_empty
            assert region.integrate(ones, spec) == 0.0

    @pytest.mark.parametrize(
        "build",
        [
            lambda: Rectangle(1.0, 0.0, 0.0, 1.0),
            lambda: Disk(0.0, -1.0),
            lambda: Annulus(0.0, 2.0, 1.0),
            lambda: RealInterval(1.0, 0.0),
        ],
    )
    def test_invalid(self, build):
        with pytest.raises(ValidationError):
            build()


class TestParseRegion:
    def test_kinds(self):
        assert parse_region("disk:0,1,2") == Disk(1.0j, 2.0)
        assert parse_region("annulus:0,0,1,3") == Annulus(0.0, 1.0, 3.0)
        assert parse_region("rect:0,1,-1,1") == Rectangle(0.0, 1.0, -1.0, 1.0)
        assert parse_region("interval:-inf,2") == RealInterval(-math.inf, 2.0)
        assert isinstance(parse_region("plane"), WholePlane)

    @pytest.mark.parametrize("text", ["disk:0,1", "hexagon:1,2", "rect:a,b,c,d", ""])
    def test_invalid(self, text):
        with pytest.raises(ValidationError):
            parse_region(text)

    def test_describe(self):
        assert parse_region("disk:0,1,2").describe() == {
            "kind": "disk",
            "center": [0.0, 1.0],
            "radius": 2.0,
        }


class TestGridSpec:
    def test_row_major_points(self):
        grid = GridSpec.parse("-1,1,0,2,3,2")
        points = grid.points()
        assert points.shape == (6,)
        np.testing.assert_allclose(points[:3], [-1.0, 0.0, 1.0])
        assert points[3] == -1.0 + 2.0j

    @pytest.mark.parametrize(
        "text", ["", "0,1,0,1,2", "0,1,0,1,0,3", "1,0,0,1,2,2", "a,1,0,1,2,2"]
    )
    def test_invalid(self, text):
        with pytest.raises(ValidationError):
            GridSpec.parse(text)

    def test_json(self):
        grid = GridSpec(0.0, 1.0, 0.0, 1.0, 2, 2)
        assert GridSpec.from_json(grid.to_json()) == grid
