#!/usr/bin/env python3
"""
Mahler Kernels CLI Tool

Command-line interface for density grids, expected root counts, the
identity suite, convergence tables, starbody sampling and sample statistics.
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from .. import __version__
from ..core.ensemble import Field
from ..core.errors import (
    EXIT_OK,
    MahlerKernelsError,
    ValidationError,
    VerificationError,
)
from ..core.geometry import GridSpec, WholePlane, parse_region
from ..kernels import complex_kernel, limits, real_kernel
from ..kernels.limits import Regime
from ..kernels.skew_system import SkewBasis
from ..numerics.quadrature import DEFAULT_TOLERANCE
from ..sampling.starbody import (
    PolynomialSample,
    SamplerStats,
    roots_statistics,
    sample_starbody,
)
from ..utils import output
from .config import GRID_REGIMES, RunConfig, parse_n_values
from .verify import run_suite

logger = logging.getLogger("mahler_kernels.cli")

DEFAULT_STATS_REGION = "interval:-2,2"


class MahlerKernelsCLI:
    """Mahler kernels command-line interface"""

    def execute(self, config: RunConfig) -> int:
        """Run one validated command and return its exit code"""
        logger.info(f"Running '{config.command}'")
        handler = getattr(self, f"cmd_{config.command}")
        return handler(config)

    def _emit(
        self,
        config: RunConfig,
        payload: Any,
        numerics: Optional[Dict[str, Any]] = None,
    ):
        """
        Write a JSON payload and its sidecar, or print both without --out.

        Printed output is the sidecar record with the payload under "result".
        """
        if config.out:
            output.write_json(config.out, payload)
            output.write_metadata(config.out, config.to_dict(), numerics)
        else:
            record = output.metadata_record(config.to_dict(), numerics)
            record["result"] = payload
            print(output.dumps(record))

    def cmd_grid(self, config: RunConfig) -> int:
        """Density grid as `x,y,value` CSV"""
        points = config.grid.points()
        numerics: Dict[str, Any] = {
            "points": int(points.size),
            "weighted": config.weighted,
        }

        if config.regime == "complex":
            params = config.ensemble()
            values = complex_kernel.density_grid(params, config.grid, config.weighted)
        elif config.regime in ("real-complex", "real-line"):
            basis = SkewBasis(config.ensemble())
            line = config.regime == "real-line"
            values = real_kernel.density_grid_real(basis, points, line=line)
        else:
            lp = config.limit_params()
            frame = config.frame(Regime(config.regime.split("-", 1)[1]))
            values = limits.limit_density(
                lp, frame, config.field, points, config.weighted
            )
            numerics.update({"lambda": lp.lam, "c": lp.c, "frame": frame.to_dict()})

        finite = np.isfinite(values)
        if not np.all(finite):
            logger.warning(f"{int((~finite).sum())} grid points have no finite value")
        output.write_grid_csv(config.out, points, values)
        output.write_metadata(config.out, config.to_dict(), numerics)
        return EXIT_OK

    def cmd_expected(self, config: RunConfig) -> int:
        """Expected root counts as JSON"""
        params = config.ensemble()
        spec = config.quadrature(params)
        numerics = {
            "tol": spec.tol,
            "halfplane": spec.truncation_radius or "exterior-map",
        }
        if params.is_real:
            counts = real_kernel.expected_counts(params, spec)
            payload = {
                "N": counts.n,
                "s": counts.s,
                "E_in": counts.e_in,
                "E_in_quadrature": counts.e_in_quadrature,
                "E_out": counts.e_out,
                "complex_pairs": counts.complex_pairs,
                "total": counts.total,
                "eout_log_ratio": counts.eout_log_ratio,
            }
        else:
            regions = config.parsed_regions() or [WholePlane()]
            payload = {
                "N": params.n,
                "s": params.s,
                "regions": [
                    {
                        "region": region.describe(),
                        "count": complex_kernel.expected_count_complex(
                            params, region, spec
                        ),
                    }
                    for region in regions
                ],
            }
        self._emit(config, payload, numerics)
        return EXIT_OK

    def cmd_verify(self, config: RunConfig) -> int:
        """Identity suite; fails with the verification exit code"""
        params = config.ensemble() if config.n is not None else None
        if params is not None and not params.is_real:
            params = None
            logger.info("Verify uses the real ensemble; ignoring the complex --n/--s")
        report = run_suite(params, config.quadrature(), config.perturb, config.seed)
        self._emit(config, report.summary(), {"tol": config.tol})
        if not report.passed:
            raise VerificationError(f"Failed checks: {', '.join(report.failures)}")
        return EXIT_OK

    def cmd_converge(self, config: RunConfig) -> int:
        """Convergence table as `N,s,regime,point,error` CSV"""
        target = limits.Target(config.target)
        rows = limits.converge(
            target,
            config.n_values,
            config.limit_params(),
            config.point_pairs(),
            frame=config.frame(target.regime),
            spec=config.quadrature(),
        )
        errors = limits.sup_errors(rows)
        ordered = [errors[n] for n in sorted(errors)]
        ratios = [
            a / b if b > 0 else float("inf") for a, b in zip(ordered, ordered[1:])
        ]
        for n, error in sorted(errors.items()):
            logger.info(f"N={n}: sup error {error:.6e}")
        output.write_convergence_csv(config.out, rows)
        output.write_metadata(
            config.out,
            config.to_dict(),
            {"tol": config.tol, "sup_errors": errors, "error_ratios": ratios},
        )
        return EXIT_OK

    def cmd_sample(self, config: RunConfig) -> int:
        """Starbody samples as JSON lines"""
        params = config.ensemble()
        stats = SamplerStats()
        logger.info(
            f"Sampling N={params.n}, s={params.s}, "
            f"lambda={params.sampler_lambda:.6g}"
        )
        samples = sample_starbody(params, config.seed, config.count, stats)
        if stats.bound_violations:
            logger.warning(f"{stats.bound_violations} gauge bound violations")
        output.write_jsonl(config.out, (sample.to_record() for sample in samples))
        output.write_metadata(
            config.out,
            config.to_dict(),
            {
                "lambda": params.sampler_lambda,
                "sampler": stats.to_dict(),
                "acceptance_rate": stats.acceptance_rate,
            },
        )
        return EXIT_OK

    def cmd_stats(self, config: RunConfig) -> int:
        """Region statistics of a sample file as JSON"""
        if not os.path.isfile(config.samples):
            raise ValidationError(f"Sample file not found: {config.samples}")
        records = output.read_jsonl(config.samples)
        samples = [PolynomialSample.from_record(r) for r in records]
        regions = config.parsed_regions() or [parse_region(DEFAULT_STATS_REGION)]
        report = roots_statistics(samples, regions, config.realness_tol)
        self._emit(config, report.to_dict(), {"realness_tol": config.realness_tol})
        return EXIT_OK


def _add_ensemble_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="Number of points N")
    parser.add_argument("--s", type=float, help="Weight exponent s > N")
    parser.add_argument(
        "--field",
        choices=[f.value for f in Field],
        default=Field.COMPLEX.value,
        help="Coefficient field (default: complex)",
    )


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", help="Output path; a .meta.json sidecar is written next to it"
    )
    parser.add_argument(
        "--tol", type=float, default=DEFAULT_TOLERANCE, help="Quadrature tolerance"
    )


def _add_limit_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--lam", type=float, default=1.0, help="Limit lambda (default: 1)"
    )
    parser.add_argument(
        "--c", type=float, default=float("inf"), help="Limit c (default: inf)"
    )
    parser.add_argument(
        "--center", type=float, default=0.0, help="Bulk center in (-2, 2)"
    )
    parser.add_argument("--edge", type=float, default=2.0, help="Edge point 2 or -2")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of the mahler-kernels command"""
    parser = argparse.ArgumentParser(
        prog="mahler-kernels",
        description="Mahler Kernels - reciprocal Mahler ensembles and their limits",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  mahler-kernels grid --regime complex --n 4 --s 8 --grid=-3,3,-3,3,61,61 --out k.csv
  mahler-kernels grid --regime limit-edge --lam 1 --grid=-6,2,-4,4,81,81 --out edge.csv
  mahler-kernels expected --n 2 --s 10 --field real
  mahler-kernels verify --out verify.json
  mahler-kernels converge --target bulk-complex --lam 0.5 --n-values 16,32,64 \\
      --points 0 --out c.csv
  mahler-kernels sample --n 2 --s 10 --field real --seed 7 --count 20000 \\
      --out samples.jsonl
  mahler-kernels stats --samples samples.jsonl --region interval:-2,2
        """,
    )
    parser.add_argument(
        "--version", action="version", version=f"mahler-kernels {__version__}"
    )
    parser.add_argument(
        "-d", "--debug", action="store_true", help="Enable debug logging"
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    grid_parser = subparsers.add_parser("grid", help="Write a density grid")
    _add_ensemble_args(grid_parser)
    _add_output_args(grid_parser)
    _add_limit_args(grid_parser)
    grid_parser.add_argument("--regime", choices=GRID_REGIMES, help="Density regime")
    grid_parser.add_argument("--grid", help="Lattice x0,x1,y0,y1,nx,ny")
    grid_parser.add_argument(
        "--unweighted",
        action="store_true",
        help="Drop the weight from the kernel diagonal",
    )

    expected_parser = subparsers.add_parser("expected", help="Expected root counts")
    _add_ensemble_args(expected_parser)
    _add_output_args(expected_parser)
    expected_parser.add_argument(
        "--region",
        action="append",
        default=[],
        help="Region for complex counts (repeatable)",
    )
    expected_parser.add_argument(
        "--truncate",
        action="store_true",
        help="Truncate half-plane integrals at the radius of the tail bound",
    )

    verify_parser = subparsers.add_parser("verify", help="Run the identity suite")
    _add_ensemble_args(verify_parser)
    _add_output_args(verify_parser)
    verify_parser.set_defaults(field=Field.REAL.value)
    verify_parser.add_argument(
        "--seed", type=int, default=0, help="Seed of the random matrices"
    )
    verify_parser.add_argument(
        "--perturb",
        action="store_true",
        help="Perturb a skew-orthogonal coefficient (test mode)",
    )

    converge_parser = subparsers.add_parser(
        "converge", help="Write a convergence table"
    )
    _add_output_args(converge_parser)
    _add_limit_args(converge_parser)
    converge_parser.add_argument(
        "--target", choices=[t.value for t in limits.Target], help="Kernel and regime"
    )
    converge_parser.add_argument(
        "--n-values", help="Strictly increasing N sequence, e.g. 16,32,64"
    )
    converge_parser.add_argument("--points", help="Scaled point pairs a,b;a,b")

    sample_parser = subparsers.add_parser(
        "sample", help="Sample polynomials from the starbody"
    )
    _add_ensemble_args(sample_parser)
    _add_output_args(sample_parser)
    sample_parser.add_argument(
        "--seed", type=int, default=0, help="Generator seed (default: 0)"
    )
    sample_parser.add_argument(
        "--count", type=int, default=1000, help="Number of samples"
    )

    stats_parser = subparsers.add_parser(
        "stats", help="Root statistics of a sample file"
    )
    _add_output_args(stats_parser)
    stats_parser.add_argument("--samples", help="JSON-lines sample file")
    stats_parser.add_argument(
        "--region", action="append", default=[], help="Region to count in (repeatable)"
    )
    stats_parser.add_argument(
        "--realness-tol", type=float, default=1e-8, help="Relative realness tolerance"
    )

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Resolve parsed arguments into a RunConfig"""
    values = {"command": args.command}
    for name in (
        "n", "s", "field", "regime", "seed", "tol", "count", "out", "perturb",
        "lam", "c", "center", "edge", "target", "points", "samples", "realness_tol",
    ):
        if getattr(args, name, None) is not None:
            values[name] = getattr(args, name)
    if getattr(args, "grid", None):
        values["grid"] = GridSpec.parse(args.grid)
    if getattr(args, "n_values", None):
        values["n_values"] = parse_n_values(args.n_values)
    if getattr(args, "region", None):
        values["regions"] = list(args.region)
    if getattr(args, "unweighted", False):
        values["weighted"] = False
    if getattr(args, "truncate", False):
        values["truncate"] = True
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 1

    level = logging.DEBUG if args.debug else logging.INFO
    logging.basicConfig(
        level=level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    try:
        config = config_from_args(args).validate()
        return MahlerKernelsCLI().execute(config)
    except MahlerKernelsError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except KeyboardInterrupt:
        print("\nInterrupted")
        return 1


if __name__ == "__main__":
    sys.exit(main())
