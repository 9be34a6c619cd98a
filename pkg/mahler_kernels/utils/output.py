"""
Output Files

Atomic writers for the artifacts produced by the CLI: density grids and
convergence tables as CSV, samples as JSON lines, reports as JSON, and the
metadata sidecar `<out>.meta.json` that makes every artifact self-describing.
Floats are written with 17 significant digits so they read back exactly.
"""

import csv
import io
import json
import logging
import math
import os
import tempfile
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from .. import __version__

logger = logging.getLogger("mahler_kernels.output")

FORMAT_VERSION = "1"

GRID_HEADER = ("x", "y", "value")
CONVERGENCE_HEADER = ("N", "s", "regime", "point", "error")
META_SUFFIX = ".meta.json"


def format_float(value: float) -> str:
    """17 significant digits; nan and inf spelled as Python reads them"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def atomic_write(path: str, text: str) -> None:
    """
    Write text to path through a temporary file in the same directory.

    The target is replaced in one rename, so readers never see a partial file.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.info(f"Wrote {path}")


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps(value: Any, indent: Optional[int] = 2) -> str:
    """JSON text with complex numbers as [re, im] pairs"""
    return json.dumps(_jsonable(value), indent=indent, sort_keys=True)


def write_json(path: str, value: Any) -> None:
    atomic_write(path, dumps(value) + "\n")


def write_grid_csv(path: str, points: np.ndarray, values: np.ndarray) -> None:
    """
    Write an `x,y,value` grid.

    Args:
        path: Target file
        points: Complex lattice points in row-major order
        values: Real values, one per point
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(GRID_HEADER)
    for z, v in zip(np.ravel(points), np.ravel(values)):
        writer.writerow((format_float(z.real), format_float(z.imag), format_float(v)))
    atomic_write(path, buffer.getvalue())


def write_convergence_csv(path: str, rows: Sequence[Any]) -> None:
    """Write an `N,s,regime,point,error` table from ConvergenceRow objects"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CONVERGENCE_HEADER)
    for row in rows:
        writer.writerow(
            (row.n, format_float(row.s), row.regime, row.point, format_float(row.error))
        )
    atomic_write(path, buffer.getvalue())


def write_jsonl(path: str, records: Iterable[Dict[str, Any]]) -> None:
    lines = [dumps(record, indent=None) for record in records]
    atomic_write(path, "".join(line + "\n" for line in lines))


def read_jsonl(path: str) -> Iterator[Dict[str, Any]]:
    with open(path) as f:
        for line in f:
            if line.strip():
                yield json.loads(line)


def read_csv(path: str) -> List[Dict[str, str]]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def metadata_path(out: str) -> str:
    return out + META_SUFFIX


def metadata_record(
    config: Dict[str, Any], numerics: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """Format and package versions, resolved config and numerical metadata"""
    return {
        "format_version": FORMAT_VERSION,
        "package_version": __version__,
        "config": config,
        "numerics": numerics or {},
    }


def write_metadata(
    out: str, config: Dict[str, Any], numerics: Optional[Dict[str, Any]] = None
) -> str:
    """
    Write the sidecar of an output file.

    Args:
        out: Path of the artifact the sidecar describes
        config: Resolved run configuration as a dict
        numerics: Numerical metadata such as tolerances and truncation radii

    Returns:
        Path of the sidecar
    """
    path = metadata_path(out)
    write_json(path, metadata_record(config, numerics))
    return path
