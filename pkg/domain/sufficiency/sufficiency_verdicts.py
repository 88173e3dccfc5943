"""Sampled verdicts for the global sufficient conditions.

A verdict is "certified (modulo sampling)" when no sampled pair falsifies a
hypothesis and "hypotheses violated" otherwise. Witnesses are proofs;
certification is evidence only.

Generalised convexity of ``f`` is tested over the whole sampling box. For
``μ·g`` only pairs anchored at the candidate are sampled: x̄ is the candidate
and x is a feasible point with ``f(x) ∈ f(x̄) − int C``.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from domain.certificates.fj_certificates import MultiplierPair, quadratic_forms, validate_multipliers
from domain.core.errors import InfeasiblePointError, InvalidMultiplierError, NonsmoothPointError
from domain.model.vector_problem import VectorProblem, WeightedMap, evaluate, feasible_mask, is_feasible
from domain.sufficiency.convexity_falsifiers import (
    ConvexityWitness,
    PairFilter,
    falsify_pseudoconvex,
    falsify_second_order_pseudoconvex,
    falsify_second_order_strict_pseudoconvex,
    falsify_strict_pseudoconvex,
)
from domain.sufficiency.pair_sampler import SamplingBudget, sample_points

logger = logging.getLogger(__name__)

CERTIFIED = "certified (modulo sampling)"
VIOLATED = "hypotheses violated"

CHECK_PSEUDOCONVEX_F = "f pseudoconvex w.r.t. C"
CHECK_STRICT_MU_G = "μ·g strictly pseudoconvex"
CHECK_SECOND_ORDER_F = "f second-order pseudoconvex w.r.t. C"
CHECK_SECOND_ORDER_MU_G = "μ·g second-order strictly pseudoconvex"
CHECK_CURVATURE = "multiplier curvature on the restriction set"

MULTIPLIER_CURVATURE = "multiplier curvature"


@dataclass
class SufficiencyVerdict:
    order: int
    pair: MultiplierPair
    budget: SamplingBudget
    checks: List[Tuple[str, Optional[ConvexityWitness]]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(witness is None for _, witness in self.checks)

    @property
    def verdict(self) -> str:
        return CERTIFIED if self.certified else VIOLATED

    @property
    def witnesses(self) -> List[ConvexityWitness]:
        return [witness for _, witness in self.checks if witness is not None]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "verdict": self.verdict,
            "certified": self.certified,
            "pair": self.pair.to_dict(),
            "checks": [
                {"hypothesis": name, "witness": None if witness is None else witness.to_dict()}
                for name, witness in self.checks
            ],
            "budget": self.budget.to_dict(),
        }


def _prepare(problem: VectorProblem, x_bar, pair: MultiplierPair, budget: SamplingBudget) -> Tuple[np.ndarray, SamplingBudget]:
    if not problem.is_smooth:
        raise NonsmoothPointError("sufficiency verdicts need differentiable f and g")
    anchor = problem.point(x_bar)
    if not is_feasible(problem, anchor):
        raise InfeasiblePointError(f"x̄={anchor.tolist()} is not feasible")
    validate_multipliers(problem, pair.lam, pair.mu)
    point = evaluate(problem, anchor, order=1)
    tol = problem.tolerances
    slackness = abs(float(pair.mu @ point.g_val))
    if slackness > tol.slackness:
        raise InvalidMultiplierError(f"μ·g(x̄) = {slackness:.3e} exceeds the slackness tolerance")
    stationarity = float(np.max(np.abs(pair.lam @ point.jac_f + pair.mu @ point.jac_g)))
    if stationarity > tol.stationarity:
        raise InvalidMultiplierError(f"‖λ∇f(x̄) + μ∇g(x̄)‖ = {stationarity:.3e} exceeds the stationarity tolerance")
    return anchor, replace(budget, box=budget.resolve_box(problem.s, problem.domain_box))


def _mu_active(problem: VectorProblem, pair: MultiplierPair) -> bool:
    return bool(np.linalg.norm(pair.mu) > problem.tolerances.membership)


def feasible_dominators(problem: VectorProblem, x_bar: np.ndarray) -> PairFilter:
    """Pairs whose x is feasible with ``f(x) ∈ f(x̄) − int C``."""
    f_bar = problem.objective_map.value(x_bar)

    def admissible(anchors: np.ndarray, points: np.ndarray) -> np.ndarray:
        mask, _ = feasible_mask(problem, points)
        differences = f_bar - problem.objective_map.values_batch(points)
        return mask & problem.cone_c.interior_contains_many(differences, problem.tolerances.strict)

    return admissible


def first_order_global_verdict(problem: VectorProblem, x_bar, pair: MultiplierPair,
                               budget: SamplingBudget = SamplingBudget()) -> SufficiencyVerdict:
    """Pseudoconvexity of f and, when μ ≠ 0, strict pseudoconvexity of μ·g.

    Raises:
        InvalidMultiplierError: the pair is not a first-order Fritz John pair at x̄
        InfeasiblePointError: x̄ is not feasible
    """
    anchor, budget = _prepare(problem, x_bar, pair, budget)
    tol = problem.tolerances
    verdict = SufficiencyVerdict(1, pair, budget)
    verdict.checks.append((CHECK_PSEUDOCONVEX_F, falsify_pseudoconvex(problem.objective_map, problem.cone_c, budget, tol)))
    if _mu_active(problem, pair):
        weighted = WeightedMap(problem.constraint_map, pair.mu)
        witness = falsify_strict_pseudoconvex(weighted, budget, tol, anchor=anchor,
                                              admissible=feasible_dominators(problem, anchor))
        verdict.checks.append((CHECK_STRICT_MU_G, witness))
    logger.info(f"first-order global verdict at {anchor.tolist()}: {verdict.verdict}")
    return verdict


def _boundary_many(cone, vectors: np.ndarray, tol) -> np.ndarray:
    return cone.contains_many(vectors, tol.membership) & ~cone.interior_contains_many(vectors, tol.strict)


def curvature_violation(problem: VectorProblem, x_bar: np.ndarray, pair: MultiplierPair,
                        budget: SamplingBudget) -> Optional[ConvexityWitness]:
    """First sampled feasible x with ``λ·dᵀ∇²f(x̄)d + μ·dᵀ∇²g(x̄)d < 0`` on the restriction set.

    The restriction set asks ``f(x) ∈ f(x̄) − int C`` together with
    ``∇f(x̄)d ∈ −(C ∖ int C)`` and ``∇g(x̄)d ∈ −(K ∖ int K)`` for ``d = x − x̄``.
    """
    tol = problem.tolerances
    point = evaluate(problem, x_bar, order=2)
    box = budget.resolve_box(problem.s, problem.domain_box)
    for points in sample_points(budget, box, x_bar):
        mask, _ = feasible_mask(problem, points)
        differences = point.f_val - problem.objective_map.values_batch(points)
        mask &= problem.cone_c.interior_contains_many(differences, tol.strict)
        units = points - x_bar
        units /= np.linalg.norm(units, axis=1)[:, None]
        mask &= _boundary_many(problem.cone_c, -units @ point.jac_f.T, tol)
        mask &= _boundary_many(problem.cone_k, -units @ point.jac_g.T, tol)
        for index in np.flatnonzero(mask):
            u = units[index]
            value = float(pair.lam @ quadratic_forms(point.hess_f, u) + pair.mu @ quadratic_forms(point.hess_g, u))
            if value < -tol.membership:
                antecedent = float(np.min(problem.cone_c.margins(differences[index])))
                return ConvexityWitness(tuple(x_bar.tolist()), tuple(points[index].tolist()),
                                        MULTIPLIER_CURVATURE, "curvature", antecedent, value)
    return None


def second_order_global_verdict(problem: VectorProblem, x_bar, pair: MultiplierPair,
                                budget: SamplingBudget = SamplingBudget()) -> SufficiencyVerdict:
    """Second-order pseudoconvexity of f, the multiplier curvature condition and, when μ ≠ 0,
    second-order strict pseudoconvexity of μ·g.
    """
    anchor, budget = _prepare(problem, x_bar, pair, budget)
    tol = problem.tolerances
    verdict = SufficiencyVerdict(2, pair, budget)
    verdict.checks.append((
        CHECK_SECOND_ORDER_F,
        falsify_second_order_pseudoconvex(problem.objective_map, problem.cone_c, budget, tol),
    ))
    verdict.checks.append((CHECK_CURVATURE, curvature_violation(problem, anchor, pair, budget)))
    if _mu_active(problem, pair):
        weighted = WeightedMap(problem.constraint_map, pair.mu)
        witness = falsify_second_order_strict_pseudoconvex(weighted, budget, tol, anchor=anchor,
                                                           admissible=feasible_dominators(problem, anchor))
        verdict.checks.append((CHECK_SECOND_ORDER_MU_G, witness))
    logger.info(f"second-order global verdict at {anchor.tolist()}: {verdict.verdict}")
    return verdict
