"""Tests for the run configuration"""

import math

import pytest

from mahler_kernels.cli.config import RunConfig, parse_n_values, parse_points
from mahler_kernels.core.errors import ValidationError
from mahler_kernels.core.geometry import Disk, GridSpec


class TestParsing:
    def test_n_values(self):
        assert parse_n_values("16,32,64") == [16, 32, 64]
        assert parse_n_values("8, 16,") == [8, 16]

    def test_invalid_n_values(self):
        with pytest.raises(ValidationError):
            parse_n_values("16,x")

    def test_points(self):
        assert parse_points("0,1;2") == [(0j, 1 + 0j), (2 + 0j, 2 + 0j)]
        assert parse_points("1+1j, 2-0.5j") == [(1 + 1j, 2 - 0.5j)]
        assert parse_points("") == []

    @pytest.mark.parametrize("text", ["a,b", "1,2,3"])
    def test_invalid_points(self, text):
        with pytest.raises(ValidationError):
            parse_points(text)


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig(command="verify")
        assert config.validate() is config
        assert config.c == math.inf
        assert config.weighted

    def test_ensemble(self):
        params = RunConfig(command="expected", n=2, s=10.0, field="real").ensemble()
        assert params.is_real
        with pytest.raises(ValidationError):
            RunConfig(command="expected", n=2).ensemble()

    def test_regions(self):
        config = RunConfig(command="stats", samples="x.jsonl", regions=["disk:0,0,1"])
        assert config.parsed_regions() == [Disk(0j, 1.0)]

    def test_serializes_grid(self):
        config = RunConfig(command="grid", grid=GridSpec(0.0, 1.0, 0.0, 1.0, 2, 2))
        assert config.to_dict()["grid"]["nx"] == 2

    @pytest.mark.parametrize(
        "values",
        [
            {"command": "plot"},
            {"command": "expected", "n": 2, "s": 10.0, "field": "quaternion"},
            {"command": "expected", "n": 2, "s": 10.0, "tol": 0.0},
            {"command": "expected", "n": 3, "s": 10.0, "field": "real"},
            {"command": "expected", "n": 4, "s": 4.0},
            {"command": "sample", "n": 2, "s": 10.0, "count": 0, "out": "s.jsonl"},
            {"command": "sample", "n": 2, "s": 10.0},
            {"command": "grid", "regime": "complex", "n": 4, "s": 8.0, "out": "g.csv"},
            {
                "command": "grid",
                "regime": "real-line",
                "n": 4,
                "s": 8.0,
                "out": "g.csv",
                "grid": GridSpec(0.0, 1.0, 0.0, 0.0, 3, 1),
            },
            {
                "command": "grid",
                "regime": "limit-exterior",
                "out": "g.csv",
                "grid": GridSpec(3.0, 4.0, 0.5, 1.0, 2, 2),
            },
            {
                "command": "converge",
                "target": "nowhere",
                "n_values": [4, 8],
                "out": "c.csv",
            },
            {
                "command": "converge",
                "target": "bulk-complex",
                "n_values": [8, 4],
                "out": "c.csv",
            },
            {
                "command": "converge",
                "target": "bulk-complex",
                "n_values": [4, 8],
                "out": "c.csv",
            },
            {"command": "stats"},
        ],
    )
    def test_invalid(self, values):
        with pytest.raises(ValidationError):
            RunConfig(**values).validate()

    def test_valid_converge(self):
        config = RunConfig(
            command="converge",
            target="edge-kappa-eps",
            n_values=[8, 16],
            points="0.5,1.0",
            out="c.csv",
        )
        assert config.validate().point_pairs() == [(0.5 + 0j, 1 + 0j)]
