"""Tests for the output writers"""

import json
import math
import os

import numpy as np
import pytest

from mahler_kernels import __version__
from mahler_kernels.kernels.limits import ConvergenceRow
from mahler_kernels.utils import output


class TestFormatting:
    def test_float_precision(self):
        assert float(output.format_float(0.1)) == 0.1
        assert output.format_float(1.0 / 3.0) == "0.33333333333333331"

    def test_special_values(self):
        assert output.format_float(math.nan) == "nan"
        assert output.format_float(math.inf) == "inf"
        assert output.format_float(-math.inf) == "-inf"

    def test_complex_as_pairs(self):
        text = output.dumps(
            {"z": 1.5 - 2.0j, "values": np.array([1j]), "n": np.int64(3)}
        )
        assert json.loads(text) == {"z": [1.5, -2.0], "values": [[0.0, 1.0]], "n": 3}


class TestFiles:
    def test_atomic_write_replaces(self, tmp_path):
        path = tmp_path / "nested" / "out.txt"
        output.atomic_write(str(path), "first")
        output.atomic_write(str(path), "second")
        assert path.read_text() == "second"
        assert [p.name for p in path.parent.iterdir()] == ["out.txt"]

    def test_grid_csv(self, tmp_path):
        path = str(tmp_path / "grid.csv")
        points = np.array([0.5 + 1.0j, -1.0 + 0.0j])
        output.write_grid_csv(path, points, np.array([0.25, 2.0]))
        rows = output.read_csv(path)
        assert list(rows[0]) == list(output.GRID_HEADER)
        assert [float(r["y"]) for r in rows] == [1.0, 0.0]
        assert float(rows[1]["value"]) == 2.0

    def test_convergence_csv(self, tmp_path):
        path = str(tmp_path / "conv.csv")
        rows = [ConvergenceRow(16, 32.0, "bulk", "(0.1, 0.1)", 1.0, 1.0, 2.5e-4)]
        output.write_convergence_csv(path, rows)
        table = output.read_csv(path)
        assert list(table[0]) == ["N", "s", "regime", "point", "error"]
        assert table[0]["N"] == "16"
        assert float(table[0]["error"]) == 2.5e-4

    def test_jsonl(self, tmp_path):
        path = str(tmp_path / "samples.jsonl")
        output.write_jsonl(path, [{"index": 0, "root": 1j}, {"index": 1, "root": 2.0}])
        records = list(output.read_jsonl(path))
        assert records == [{"index": 0, "root": [0.0, 1.0]}, {"index": 1, "root": 2.0}]

    def test_metadata_sidecar(self, tmp_path):
        out = str(tmp_path / "grid.csv")
        path = output.write_metadata(out, {"n": 4}, {"tol": 1e-10})
        assert path == out + ".meta.json"
        assert os.path.exists(path)
        with open(path) as f:
            meta = json.load(f)
        assert meta["format_version"] == output.FORMAT_VERSION
        assert meta["package_version"] == __version__
        assert meta["config"] == {"n": 4}
        assert meta["numerics"]["tol"] == pytest.approx(1e-10)
