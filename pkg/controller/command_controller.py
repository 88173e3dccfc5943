"""
Controller for the fjcone command line.

This controller orchestrates one invocation:
- argument parsing and tolerance overrides
- problem loading and candidate validation
- dispatch to the certificate, sufficiency, oracle and derivative engines
- report rendering and exit codes
"""
import argparse
import logging
import time
from typing import Callable, Dict, List, Optional, Type

import numpy as np

from controller.argument_parser import parse_arguments, parse_box_bounds, parse_vector
from controller.path_protocol import PathLike
from domain.adapters.problem_loader import load_problem
from domain.certificates.candidate_check import Verdict, check_candidate, infeasible_report
from domain.certificates.critical_cone import sample_critical_directions
from domain.certificates.fj_certificates import critical_cone, first_order_certificate, pair_from_multipliers
from domain.core.errors import CommandLineError, FJConeError, NumericalError, UsageError
from domain.core.report_handler import ReportHandler
from domain.derivatives.directional_derivatives import (
    LimitSchedule,
    component_function,
    dini_lower,
    hadamard_lower,
    hadamard_second_lower,
)
from domain.derivatives.scalarized_gap import gap_derivative_check
from domain.model.certificate_report import CertificateReport
from domain.model.vector_problem import DomainBox, VectorProblem, is_feasible
from domain.oracles.oracle_scan import RANDOM, ScanGrid, weak_global_scan, weak_local_min_oracle
from domain.parsing.problem_parser import parse_cone
from domain.parsing.problem_serializer import digest
from domain.sufficiency.isolated_minima import (
    NOT_CERTIFIED,
    isolated_first_order_check,
    isolated_second_order_check,
)
from domain.sufficiency.pair_sampler import SamplingBudget
from domain.sufficiency.sufficiency_verdicts import (
    CERTIFIED,
    VIOLATED,
    first_order_global_verdict,
    second_order_global_verdict,
)
from view.interface import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, ActionKind, ActionResult, UIInterface
from view.output_format import OutputFormat

logger = logging.getLogger(__name__)

HandlerMap = Dict[OutputFormat, Type[ReportHandler]]
PathFactory = Callable[[str], PathLike]
ProblemLoader = Callable[[PathLike], VectorProblem]

FLAG_SECOND_ORDER_SKIPPED = "second-order isolation skipped: f or g not differentiable at x̄"
SCAN_WEAKLY_EFFICIENT = "weakly efficient on sample"
SCAN_DOMINATED = "dominated"


class CommandController:
    """Controller that turns one argument vector into one report and an exit code."""

    def __init__(
        self,
        ui: UIInterface,
        handlers: HandlerMap,
        path_factory: PathFactory,
        problem_loader: ProblemLoader = load_problem,
        configure_logging: Callable[[bool], None] = lambda verbose: None,
        clock: Callable[[], float] = time.perf_counter,
    ):
        self.ui = ui
        self.handlers = handlers
        self.path_factory = path_factory
        self.problem_loader = problem_loader
        self.configure_logging = configure_logging
        self.clock = clock

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Execute one invocation and return its exit code (0 verdict, 1 usage, 2 numerical)."""
        result = self._execute(argv)
        if result.kind == ActionKind.ERROR:
            self.ui.show_error(result.message)
        return result.exit_code

    def _execute(self, argv: Optional[List[str]]) -> ActionResult:
        try:
            args = parse_arguments(argv)
        except SystemExit as exit_request:
            # --help prints usage and requests exit
            code = exit_request.code if isinstance(exit_request.code, int) else EXIT_OK
            return ActionResult.success(code)
        except FJConeError as error:
            return ActionResult.error(str(error), EXIT_USAGE)
        self.configure_logging(args.verbose)
        handlers = {
            "check": self._handle_check,
            "check2": self._handle_check,
            "sufficiency": self._handle_sufficiency,
            "isolated": self._handle_isolated,
            "scan": self._handle_scan,
            "deriv": self._handle_deriv,
            "polar": self._handle_polar,
        }
        started = self.clock()
        try:
            report = handlers[args.command](args)
            report.seed = args.seed
            report.wall_time = self.clock() - started
            self._deliver(report, args)
        except UsageError as error:
            # a degenerate cone literal is a parse error first
            logger.debug(f"usage failure: {error!r}")
            return ActionResult.error(str(error), EXIT_USAGE)
        except NumericalError as error:
            logger.debug(f"numerical failure: {error!r}")
            return ActionResult.error(str(error), EXIT_NUMERICAL)
        return ActionResult.success()

    def _deliver(self, report: CertificateReport, args: argparse.Namespace):
        output_format = OutputFormat(args.format)
        handler = self.handlers[output_format](include_meta=not args.no_meta)
        if args.output:
            name = output_format.destination(args.output)
            try:
                size = handler.save(report, self.path_factory(name))
            except OSError as error:
                raise CommandLineError(f"cannot write '{name}': {error}") from error
            self.ui.show_saved(name, size)
        else:
            self.ui.emit(handler.render(report))

    # -- shared preparation -------------------------------------------------

    def _problem(self, args: argparse.Namespace) -> VectorProblem:
        problem = self.problem_loader(self.path_factory(args.problem))
        tolerances = problem.tolerances.merged(
            membership=args.tol_membership,
            strict=args.tol_strict,
            stationarity=args.tol_stationarity,
            slackness=args.tol_slackness,
            ray_activity=args.tol_ray_activity,
            margin=args.margin,
        )
        return problem.with_tolerances(tolerances)

    def _candidate(self, problem: VectorProblem, args: argparse.Namespace) -> np.ndarray:
        values = parse_vector(args.point, "--point")
        if values is None:
            raise CommandLineError(f"{args.command} needs --point")
        point = problem.point(values)
        box = problem.domain_box
        if box is not None and not (np.all(point > box.lower) and np.all(point < box.upper)):
            logger.warning(f"candidate {point.tolist()} is not interior to the problem box; X is taken to be open")
        return point

    def _report(self, problem: VectorProblem, point: np.ndarray, command: str) -> CertificateReport:
        return CertificateReport(
            command=command,
            candidate=point.tolist(),
            feasible=True,
            problem_digest=digest(problem),
            tolerances=problem.tolerances.to_dict(),
        )

    def _schedule(self, args: argparse.Namespace) -> LimitSchedule:
        return LimitSchedule(
            t0=args.t0, rho=args.rho, depth=args.depth,
            perturbation_count=args.perturbations, tail=min(4, max(args.depth, 1)), seed=args.seed,
        )

    def _box(self, args: argparse.Namespace) -> Optional[DomainBox]:
        bounds = parse_box_bounds(args.box)
        if bounds is None:
            return None
        return DomainBox([lo for lo, _ in bounds], [hi for _, hi in bounds])

    def _pair(self, problem: VectorProblem, point: np.ndarray, args: argparse.Namespace):
        lam = parse_vector(args.lam, "--lambda")
        mu = parse_vector(args.mu, "--mu")
        if lam is None and mu is None:
            return first_order_certificate(problem, point)
        lam = lam if lam is not None else [0.0] * problem.n
        mu = mu if mu is not None else [0.0] * problem.m
        return pair_from_multipliers(problem, point, lam, mu)

    # -- commands -----------------------------------------------------------

    def _handle_check(self, args: argparse.Namespace) -> CertificateReport:
        problem = self._problem(args)
        point = self._candidate(problem, args)
        second_order = args.command == "check2"
        count = args.directions if second_order else 0
        return check_candidate(problem, point, second_order=second_order, direction_count=count, seed=args.seed)

    def _handle_sufficiency(self, args: argparse.Namespace) -> CertificateReport:
        problem = self._problem(args)
        point = self._candidate(problem, args)
        if not is_feasible(problem, point):
            return infeasible_report(problem, point, args.command)
        report = self._report(problem, point, args.command)
        pair = self._pair(problem, point, args)
        report.first_order = {"certificate": None if pair is None else pair.to_dict(), "refuted": pair is None}
        if pair is None:
            report.verdict = Verdict.REFUTED_FIRST_ORDER.value
            return report
        budget = SamplingBudget(pair_count=args.pairs, box=self._box(args), seed=args.seed)
        first = first_order_global_verdict(problem, point, pair, budget)
        second = second_order_global_verdict(problem, point, pair, budget)
        report.sufficiency = {"first_order": first.to_dict(), "second_order": second.to_dict()}
        report.verdict = CERTIFIED if first.certified or second.certified else VIOLATED
        return report

    def _handle_isolated(self, args: argparse.Namespace) -> CertificateReport:
        problem = self._problem(args)
        point = self._candidate(problem, args)
        if not is_feasible(problem, point):
            return infeasible_report(problem, point, args.command)
        report = self._report(problem, point, args.command)
        if args.lam is None and args.mu is None:
            pair = first_order_certificate(problem, point)
            if pair is None:
                report.first_order = {"certificate": None, "refuted": True}
                report.verdict = Verdict.REFUTED_FIRST_ORDER.value
                return report
            lam, mu = pair.lam, pair.mu
        else:
            lam = parse_vector(args.lam, "--lambda") or [0.0] * problem.n
            mu = parse_vector(args.mu, "--mu") or [0.0] * problem.m
        budget = SamplingBudget(pair_count=args.pairs, seed=args.seed)
        isolation = {}
        if args.order in ("1", "both"):
            isolation["first_order"] = isolated_first_order_check(
                problem, point, lam, mu, budget, self._schedule(args), args.directions, args.radius,
            ).to_dict()
        if args.order in ("2", "both"):
            kinks = problem.objective_map.active_kinks(point) + problem.constraint_map.active_kinks(point)
            if kinks and args.order == "both":
                report.flags.append(FLAG_SECOND_ORDER_SKIPPED)
            else:
                directions = sample_critical_directions(critical_cone(problem, point), args.directions, args.seed)
                isolation["second_order"] = isolated_second_order_check(
                    problem, point, lam, mu, directions, budget, args.radius,
                ).to_dict()
        report.isolation = isolation
        verdicts = [section["verdict"] for section in isolation.values() if section["certified"]]
        report.verdict = verdicts[0] if verdicts else NOT_CERTIFIED
        return report

    def _handle_scan(self, args: argparse.Namespace) -> CertificateReport:
        problem = self._problem(args)
        point = self._candidate(problem, args)
        if not is_feasible(problem, point):
            return infeasible_report(problem, point, args.command)
        report = self._report(problem, point, args.command)
        if args.global_scan:
            box = self._box(args)
            result = weak_global_scan(problem, point, box, args.count, args.seed, args.points_per_axis)
            report.oracle = {"result": result.to_dict(), "box": (box or problem.domain_box or DomainBox.cube(problem.s)).to_list()}
        else:
            grid = ScanGrid(
                center=point, radius=args.radius, points_per_axis=args.points_per_axis,
                mode=RANDOM if args.random else "grid", count=args.count, seed=args.seed,
            )
            result = weak_local_min_oracle(problem, point, grid)
            report.oracle = {"result": result.to_dict(), "grid": grid.to_dict()}
        report.verdict = SCAN_WEAKLY_EFFICIENT if result.weakly_efficient else SCAN_DOMINATED
        return report

    def _handle_deriv(self, args: argparse.Namespace) -> CertificateReport:
        problem = self._problem(args)
        point = self._candidate(problem, args)
        direction = np.asarray(parse_vector(args.direction, "--direction"), dtype=float)
        if direction.size != problem.s:
            raise CommandLineError(f"--direction has {direction.size} coordinates, problem has {problem.s} variables")
        schedule = self._schedule(args)
        report = self._report(problem, point, args.command)
        report.feasible = is_feasible(problem, point)
        if args.component == "gap":
            if not report.feasible:
                return infeasible_report(problem, point, args.command)
            check = gap_derivative_check(problem, point, [direction], schedule)
            report.derivative = {"component": "gap", "check": check.to_dict()}
            return report
        h = self._component(problem, args.component)
        base = parse_vector(args.base, "--base")
        estimates = {}
        if args.kind in ("dini", "all"):
            estimates["dini_lower"] = dini_lower(h, point, direction, schedule).to_dict()
        if args.kind in ("hadamard", "all"):
            estimates["hadamard_lower"] = hadamard_lower(h, point, direction, schedule).to_dict()
        if args.kind in ("second", "all"):
            estimates["hadamard_second_lower"] = hadamard_second_lower(h, point, base, direction, schedule).to_dict()
        report.derivative = {"component": args.component, "direction": direction.tolist(), "estimates": estimates}
        return report

    def _component(self, problem: VectorProblem, name: str):
        mappings = {"f": problem.objective_map, "g": problem.constraint_map}
        mapping = mappings.get(name[:1])
        try:
            index = int(name[1:]) - 1
        except ValueError:
            index = -1
        if mapping is None or not 0 <= index < mapping.dimension:
            raise CommandLineError(f"--component must be f1..f{problem.n}, g1..g{problem.m} or gap, got '{name}'")
        return component_function(mapping, index)

    def _handle_polar(self, args: argparse.Namespace) -> CertificateReport:
        if (args.problem is None) == (args.cone is None):
            raise CommandLineError("polar needs exactly one of a problem file or --cone")
        report = CertificateReport(command=args.command)
        if args.cone is not None:
            cone = parse_cone(args.cone)
            report.polar = {"cone": cone.to_dict(), "polar": cone.polar().to_dict()}
            return report
        problem = self._problem(args)
        report.problem_digest = digest(problem)
        report.tolerances = problem.tolerances.to_dict()
        report.polar = {
            "C": problem.cone_c.to_dict(), "C*": problem.polar_c.to_dict(),
            "K": problem.cone_k.to_dict(), "K*": problem.polar_k.to_dict(),
            "C_is_orthant": problem.cone_c.is_orthant(), "K_is_orthant": problem.cone_k.is_orthant(),
        }
        return report
