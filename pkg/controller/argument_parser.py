"""Command-line grammar of the fjcone tool."""
import argparse
import math
from typing import List, NoReturn, Optional

from domain.core.errors import CommandLineError
from domain.oracles.oracle_scan import DEFAULT_GLOBAL_COUNT, DEFAULT_POINTS_PER_AXIS
from domain.sufficiency.isolated_minima import DEFAULT_RADIUS
from domain.sufficiency.pair_sampler import DEFAULT_PAIR_COUNT
from view.output_format import OutputFormat

DERIVATIVE_KINDS = ("dini", "hadamard", "second", "all")
DEFAULT_DIRECTIONS = 64
DEFAULT_SCAN_RADIUS = 0.5


class FJArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting."""

    def error(self, message: str) -> NoReturn:
        raise CommandLineError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--point", help="candidate x̄ as comma-separated decimals, e.g. 0.5,0.5")
    common.add_argument("--seed", type=int, default=0, help="seed for every sampler (default 0)")
    common.add_argument("--format", choices=OutputFormat.choices(), default=OutputFormat.JSON.value,
                        help="report format (default json)")
    common.add_argument("--no-meta", action="store_true", help="omit tool version and wall time from the report")
    common.add_argument("--output", metavar="FILE", help="write the report to FILE instead of standard output (.json or .txt appended when FILE has no suffix)")
    common.add_argument("--verbose", action="store_true", help="debug logging on standard error")
    tolerances = common.add_argument_group("tolerances (override the problem file options)")
    tolerances.add_argument("--tol-membership", type=float, help="slack of cone membership tests")
    tolerances.add_argument("--tol-strict", type=float, help="threshold of strict interior tests")
    tolerances.add_argument("--tol-stationarity", type=float, help="max stationarity residual of a certificate")
    tolerances.add_argument("--tol-slackness", type=float, help="max complementary slackness residual")
    tolerances.add_argument("--tol-ray-activity", type=float, help="activity threshold of polar rays of K")
    tolerances.add_argument("--margin", type=float, help="δ separating strict positivity from roundoff")
    return common


def _multiplier_options(parser: argparse.ArgumentParser):
    parser.add_argument("--lambda", dest="lam", help="λ as comma-separated decimals (default: computed certificate)")
    parser.add_argument("--mu", help="μ as comma-separated decimals (default: computed certificate)")


def _schedule_options(parser: argparse.ArgumentParser):
    parser.add_argument("--t0", type=float, default=1e-2, help="largest step of the limit schedule")
    parser.add_argument("--rho", type=float, default=0.5, help="step ratio of the limit schedule")
    parser.add_argument("--depth", type=int, default=20, help="number of steps of the limit schedule")
    parser.add_argument("--perturbations", type=int, default=32, help="direction perturbations per step")


def build_parser() -> FJArgumentParser:
    parser = FJArgumentParser(
        prog="fjcone",
        description="Fritz John certificates for cone-constrained vector optimization problems.",
        epilog="exit codes: 0 verdict computed, 1 usage or parse error, 2 numerical failure",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True, parser_class=FJArgumentParser)
    common = _common_options()

    check = commands.add_parser("check", parents=[common], help="first-order Fritz John certificate")
    check.add_argument("problem", help="problem file (.vopt)")

    check2 = commands.add_parser("check2", parents=[common], help="first- and second-order certificates")
    check2.add_argument("problem", help="problem file (.vopt)")
    check2.add_argument("--directions", type=int, default=DEFAULT_DIRECTIONS,
                        help="random critical directions besides the cone generators")

    sufficiency = commands.add_parser("sufficiency", parents=[common], help="sampled global sufficiency verdicts")
    sufficiency.add_argument("problem", help="problem file (.vopt)")
    _multiplier_options(sufficiency)
    sufficiency.add_argument("--pairs", type=int, default=DEFAULT_PAIR_COUNT, help="sampled pairs per hypothesis")
    sufficiency.add_argument("--box", help="sampling box lo:hi[,lo:hi...] (default: problem box or [-1,1]^s)")

    isolated = commands.add_parser("isolated", parents=[common], help="weak isolated local minimizer checks")
    isolated.add_argument("problem", help="problem file (.vopt)")
    _multiplier_options(isolated)
    isolated.add_argument("--order", choices=("1", "2", "both"), default="both", help="which isolation order to test")
    isolated.add_argument("--directions", type=int, default=DEFAULT_DIRECTIONS, help="sampled directions")
    isolated.add_argument("--radius", type=float, default=DEFAULT_RADIUS, help="neighbourhood radius for ε")
    isolated.add_argument("--pairs", type=int, default=DEFAULT_PAIR_COUNT, help="neighbourhood sample size")
    _schedule_options(isolated)

    scan = commands.add_parser("scan", parents=[common], help="brute-force weak efficiency oracle")
    scan.add_argument("problem", help="problem file (.vopt)")
    scan.add_argument("--radius", type=float, default=DEFAULT_SCAN_RADIUS, help="half-width of the local grid")
    scan.add_argument("--points-per-axis", type=int, default=DEFAULT_POINTS_PER_AXIS, help="lattice points per axis")
    scan.add_argument("--random", action="store_true", help="sample the local cube randomly instead of a lattice")
    scan.add_argument("--global", dest="global_scan", action="store_true", help="scan the whole box instead")
    scan.add_argument("--box", help="box for --global, lo:hi[,lo:hi...]")
    scan.add_argument("--count", type=int, default=DEFAULT_GLOBAL_COUNT, help="random samples for --global/--random")

    deriv = commands.add_parser("deriv", parents=[common], help="sampled lower directional derivatives")
    deriv.add_argument("problem", help="problem file (.vopt)")
    deriv.add_argument("--direction", required=True, help="direction u as comma-separated decimals")
    deriv.add_argument("--component", default="f1", help="f<i>, g<j> or gap (default f1)")
    deriv.add_argument("--kind", choices=DERIVATIVE_KINDS, default="all", help="which estimate to report")
    deriv.add_argument("--base", help="linear functional of the second-order estimate (default 0)")
    _schedule_options(deriv)

    polar_cmd = commands.add_parser("polar", parents=[common], help="extreme rays of cones and their polars")
    polar_cmd.add_argument("problem", nargs="?", help="problem file whose C and K are reported")
    polar_cmd.add_argument("--cone", help="cone literal, e.g. 'generators [[1,0],[1,1]]'")
    return parser


def parse_arguments(argv: Optional[List[str]]) -> argparse.Namespace:
    """Parse ``argv``; unknown flags and malformed values raise :class:`CommandLineError`."""
    return build_parser().parse_args(argv)


def parse_vector(text: Optional[str], flag: str) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise CommandLineError(f"{flag} expects comma-separated decimals, got '{text}'") from None
    if not all(math.isfinite(value) for value in values):
        raise CommandLineError(f"{flag} values must be finite, got '{text}'")
    return values


def parse_box_bounds(text: Optional[str]) -> Optional[List[List[float]]]:
    if text is None:
        return None
    bounds = []
    for interval in text.split(","):
        parts = interval.split(":")
        if len(parts) != 2:
            raise CommandLineError(f"--box intervals look like lo:hi, got '{interval}'")
        try:
            bounds.append([float(parts[0]), float(parts[1])])
        except ValueError:
            raise CommandLineError(f"--box bounds must be decimals, got '{interval}'") from None
    return bounds
