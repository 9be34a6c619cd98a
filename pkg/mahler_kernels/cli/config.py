"""
Run Configuration

The resolved parameter block of one CLI command. A RunConfig is validated
before any computation and embedded into the metadata sidecar of every
output file.
"""

import dataclasses
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from dataclasses_json import dataclass_json

from ..core.ensemble import EnsembleParams, Field
from ..core.errors import ValidationError
from ..core.geometry import GridSpec, Region, parse_region
from ..kernels.limits import LimitParams, Regime, ScalingFrame, Target
from ..numerics.quadrature import DEFAULT_TOLERANCE, QuadratureSpec
from ..utils.output import FORMAT_VERSION

COMMANDS = ("grid", "expected", "verify", "converge", "sample", "stats")

# Commands whose artifact must go to a file; the others print JSON without --out
FILE_COMMANDS = ("grid", "converge", "sample")

# Density grid regimes; the finite-N ones are the complex R_1 and the real
# ensemble's R_{0,1} (complex roots) and R_{1,0} (real roots)
FINITE_REGIMES = ("complex", "real-complex", "real-line")
LIMIT_REGIMES = ("limit-bulk", "limit-edge", "limit-exterior")
GRID_REGIMES = FINITE_REGIMES + LIMIT_REGIMES

DEFAULT_SAMPLE_COUNT = 1000
DEFAULT_REALNESS_TOL = 1e-8


def parse_n_values(text: str) -> List[int]:
    """Parse a comma separated N sequence such as "16,32,64" """
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"Invalid N sequence: '{text}'") from None


def parse_points(text: str) -> List[Tuple[complex, complex]]:
    """
    Parse point pairs "a,b;a,b" where each entry is a Python complex literal.

    A single value "a" stands for the diagonal pair (a, a).
    """
    pairs = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        values = chunk.split(",")
        try:
            numbers = [complex(v.strip().replace(" ", "")) for v in values]
        except ValueError:
            raise ValidationError(f"Invalid point pair: '{chunk}'") from None
        if len(numbers) == 1:
            numbers.append(numbers[0])
        if len(numbers) != 2:
            raise ValidationError(f"Invalid point pair: '{chunk}'")
        pairs.append((numbers[0], numbers[1]))
    return pairs


@dataclass_json
@dataclass
class RunConfig:
    """
    Parameters of a single command.

    Attributes:
        command: One of COMMANDS
        n: Number of points N
        s: Weight exponent s
        field: "real" or "complex"
        regime: Grid regime, see GRID_REGIMES
        grid: Lattice of the density grid
        seed: Sampler seed
        tol: Quadrature tolerance
        count: Number of samples
        out: Output path
        n_values: N sequence of a convergence table
        perturb: Perturb one skew-orthogonal coefficient (verify test mode)
        lam: Limit parameter lambda
        c: Limit parameter c (inf for c = infinity)
        center: Bulk center
        edge: Edge point (2 or -2)
        target: Convergence target
        points: Convergence point pairs "a,b;a,b"
        regions: Region descriptions for stats
        samples: Sample file read by stats
        realness_tol: Relative imaginary-part threshold for real roots
        weighted: Include the weight in density grids
        truncate: Integrate half-planes on a rectangle sized by the tail bound
        format_version: Output format tag
    """

    command: str
    n: Optional[int] = None
    s: Optional[float] = None
    field: str = Field.COMPLEX.value
    regime: Optional[str] = None
    grid: Optional[GridSpec] = None
    seed: int = 0
    tol: float = DEFAULT_TOLERANCE
    count: int = DEFAULT_SAMPLE_COUNT
    out: Optional[str] = None
    n_values: List[int] = dataclasses.field(default_factory=list)
    perturb: bool = False
    lam: float = 1.0
    c: float = math.inf
    center: float = 0.0
    edge: float = 2.0
    target: Optional[str] = None
    points: Optional[str] = None
    regions: List[str] = dataclasses.field(default_factory=list)
    samples: Optional[str] = None
    realness_tol: float = DEFAULT_REALNESS_TOL
    weighted: bool = True
    truncate: bool = False
    format_version: str = FORMAT_VERSION

    def ensemble(self) -> EnsembleParams:
        """Ensemble parameters; raises ValidationError when incomplete or invalid"""
        if self.n is None or self.s is None:
            raise ValidationError(f"Command '{self.command}' needs --n and --s")
        return EnsembleParams(n=self.n, s=self.s, field=self.field)

    def limit_params(self) -> LimitParams:
        return LimitParams(lam=self.lam, c=self.c)

    def frame(self, regime: Regime) -> ScalingFrame:
        return ScalingFrame(regime, center=self.center, edge=self.edge)

    def quadrature(self, params: Optional[EnsembleParams] = None) -> QuadratureSpec:
        """Quadrature settings; truncated at the tail-bound radius of params"""
        spec = QuadratureSpec(tol=self.tol)
        if self.truncate and params is not None:
            spec = spec.with_tail_radius(params.s, params.n)
        return spec

    def point_pairs(self) -> List[Tuple[complex, complex]]:
        pairs = parse_points(self.points or "")
        if not pairs:
            raise ValidationError("Command 'converge' needs --points")
        return pairs

    def parsed_regions(self) -> List[Region]:
        return [parse_region(text) for text in self.regions]

    def validate(self) -> "RunConfig":
        """
        Check the configuration before any computation.

        Returns:
            self

        Raises:
            ValidationError: On missing or inconsistent parameters
        """
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command: {self.command}")
        if self.field not in (Field.REAL.value, Field.COMPLEX.value):
            raise ValidationError(f"Unknown field: {self.field}")
        if not self.tol > 0:
            raise ValidationError(f"Tolerance must be positive, got {self.tol}")
        if self.n is not None or self.s is not None:
            self.ensemble()
        if self.command in FILE_COMMANDS and not self.out:
            raise ValidationError(f"Command '{self.command}' needs --out")

        if self.command == "grid":
            if self.grid is None:
                raise ValidationError("Command 'grid' needs a non-empty --grid")
            if self.regime not in GRID_REGIMES:
                raise ValidationError(
                    f"Grid regime must be one of {', '.join(GRID_REGIMES)}, "
                    f"got {self.regime}"
                )
            if self.regime in FINITE_REGIMES:
                params = self.ensemble()
                if self.regime != "complex" and not params.is_real:
                    raise ValidationError(f"Regime {self.regime} needs --field real")
                if self.regime == "complex" and params.is_real:
                    raise ValidationError("Regime complex needs --field complex")
            else:
                self.frame(Regime(self.regime.split("-", 1)[1]))
                self.limit_params()
                if self.regime == "limit-exterior" and self.limit_params().c_infinite:
                    raise ValidationError("The limit-exterior grid needs a finite --c")
        elif self.command in ("expected", "sample"):
            self.ensemble()
            if self.command == "sample" and self.count < 1:
                raise ValidationError(
                    f"Sample count must be positive, got {self.count}"
                )
        elif self.command == "converge":
            try:
                target = Target(self.target)
            except ValueError:
                raise ValidationError(
                    f"Unknown convergence target: {self.target}"
                ) from None
            if not self.n_values:
                raise ValidationError("Command 'converge' needs --n-values")
            if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
                raise ValidationError(
                    f"The N sequence must be strictly increasing, got {self.n_values}"
                )
            self.limit_params()
            self.frame(target.regime)
            self.point_pairs()
        elif self.command == "stats":
            if not self.samples:
                raise ValidationError("Command 'stats' needs --samples")
            self.parsed_regions()
        return self
