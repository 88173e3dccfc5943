"""First- and second-order Fritz John analysis of one candidate point."""
import logging
from enum import Enum

import numpy as np

from domain.certificates.critical_cone import sample_critical_directions
from domain.certificates.fj_certificates import (
    critical_cone,
    first_order_certificate,
    second_order_certificate,
    totally_degenerate,
)
from domain.model.certificate_report import CertificateReport
from domain.model.vector_problem import VectorProblem, evaluate, is_feasible
from domain.parsing.problem_serializer import digest

logger = logging.getLogger(__name__)

DEFAULT_DIRECTION_COUNT = 64

FLAG_TOTALLY_DEGENERATE = "totally degenerate stationarity"
FLAG_CONSTRAINT_INACTIVE = "constraint inactive (g(x̄) in -int K)"
FLAG_TRIVIAL_CRITICAL_CONE = "critical cone is {0}"


class Verdict(Enum):
    FJ_CONSISTENT = "FJ-consistent"
    REFUTED_FIRST_ORDER = "refuted at first order"
    REFUTED_SECOND_ORDER = "refuted at second order"
    INFEASIBLE = "infeasible candidate"

    @property
    def conclusion(self) -> str:
        return {
            Verdict.FJ_CONSISTENT: "necessary conditions hold (second order on sampled directions)",
            Verdict.REFUTED_FIRST_ORDER: "not a weak local minimizer",
            Verdict.REFUTED_SECOND_ORDER: "not a weak local minimizer (modulo direction sampling for second order)",
            Verdict.INFEASIBLE: "x̄ is not feasible",
        }[self]


def infeasible_report(problem: VectorProblem, x_bar, command: str) -> CertificateReport:
    return CertificateReport(
        command=command,
        candidate=problem.point(x_bar).tolist(),
        feasible=False,
        verdict=Verdict.INFEASIBLE.value,
        problem_digest=digest(problem),
        tolerances=problem.tolerances.to_dict(),
    )


def check_candidate(problem: VectorProblem, x_bar, second_order: bool = True,
                    direction_count: int = DEFAULT_DIRECTION_COUNT, seed: int = 0) -> CertificateReport:
    """Run the first-order and, optionally, the sampled second-order certificate search.

    An infeasible ``x_bar`` yields a report with ``feasible = False`` and no certificates.
    """
    command = "check2" if second_order else "check"
    point = problem.point(x_bar)
    if not is_feasible(problem, point):
        logger.info(f"candidate {point.tolist()} is infeasible")
        return infeasible_report(problem, point, command)

    evaluated = evaluate(problem, point, order=1)
    report = CertificateReport(
        command=command,
        candidate=point.tolist(),
        feasible=True,
        problem_digest=digest(problem),
        tolerances=problem.tolerances.to_dict(),
        seed=seed,
    )
    if totally_degenerate(evaluated):
        logger.warning(f"∇f and ∇g vanish at {point.tolist()}: every normalised pair is a certificate")
        report.flags.append(FLAG_TOTALLY_DEGENERATE)
    if np.all(problem.polar_k.generators @ evaluated.g_val < -problem.tolerances.ray_activity):
        report.flags.append(FLAG_CONSTRAINT_INACTIVE)

    first = first_order_certificate(problem, point)
    report.first_order = {"certificate": first.to_dict() if first else None, "refuted": first is None}
    if first is None:
        report.verdict = Verdict.REFUTED_FIRST_ORDER.value
        return report

    cone = critical_cone(problem, point)
    report.critical_cone = cone.to_dict()
    if cone.is_trivial:
        report.flags.append(FLAG_TRIVIAL_CRITICAL_CONE)
    if not second_order:
        report.verdict = Verdict.FJ_CONSISTENT.value
        return report

    directions = sample_critical_directions(cone, direction_count, seed)
    second = second_order_certificate(problem, point, directions)
    report.second_order = {
        "directions": [u.tolist() for u in directions],
        "certificate": second.to_dict() if second else None,
        "refuted": second is None,
        "sampled": True,
    }
    report.verdict = (Verdict.FJ_CONSISTENT if second else Verdict.REFUTED_SECOND_ORDER).value
    return report
