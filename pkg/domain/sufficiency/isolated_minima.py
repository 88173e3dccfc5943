"""Sampled checks for weak isolated local minimizers of order one and two.

Both checks test the directional condition at x̄ and then measure the
growth constant empirically: the largest ``ε <= radius`` such that

    λ·f(x) >= λ·f(x̄) + ε‖x − x̄‖ᵖ   for every sampled x ∈ S with ‖x − x̄‖ < ε

with ``p = 1`` or ``p = 2``.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import qmc

from domain.certificates.fj_certificates import critical_cone, quadratic_forms, validate_multipliers
from domain.core.errors import DirectionOutsideConeError, InfeasiblePointError, InvalidMultiplierError, ScheduleError
from domain.derivatives.directional_derivatives import LimitSchedule, component_function, dini_lower
from domain.model.vector_problem import VectorProblem, evaluate, feasible_mask, is_feasible
from domain.sufficiency.pair_sampler import SamplingBudget

logger = logging.getLogger(__name__)

FIRST_ORDER_ISOLATED = "first-order isolated (sampled)"
SECOND_ORDER_ISOLATED = "second-order isolated (sampled)"
NOT_CERTIFIED = "not certified"

DEFAULT_DIRECTION_COUNT = 64
DEFAULT_RADIUS = 1.0


@dataclass
class IsolationVerdict:
    order: int
    directions: List[List[float]]
    values: List[float]
    margin: float
    epsilon: Optional[float]
    radius: float
    neighbourhood_samples: int

    @property
    def minimum(self) -> Optional[float]:
        return min(self.values) if self.values else None

    @property
    def certified(self) -> bool:
        return all(value > self.margin for value in self.values)

    @property
    def verdict(self) -> str:
        if not self.certified:
            return NOT_CERTIFIED
        return FIRST_ORDER_ISOLATED if self.order == 1 else SECOND_ORDER_ISOLATED

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "verdict": self.verdict,
            "certified": self.certified,
            "directions": self.directions,
            "values": self.values,
            "minimum": self.minimum,
            "margin": self.margin,
            "epsilon": self.epsilon,
            "radius": self.radius,
            "neighbourhood_samples": self.neighbourhood_samples,
        }


def _prepare(problem: VectorProblem, x_bar, lam, mu):
    anchor = problem.point(x_bar)
    if not is_feasible(problem, anchor):
        raise InfeasiblePointError(f"x̄={anchor.tolist()} is not feasible")
    lam, mu = validate_multipliers(problem, lam, mu)
    if not np.any(lam):
        raise InvalidMultiplierError("λ must be nonzero for an isolated minimizer")
    slackness = abs(float(mu @ problem.constraint_map.value(anchor)))
    if slackness > problem.tolerances.slackness:
        raise InvalidMultiplierError(f"μ·g(x̄) = {slackness:.3e} exceeds the slackness tolerance")
    return anchor, lam, mu


def sphere_directions(dimension: int, count: int, seed: int = 0) -> np.ndarray:
    """± coordinate axes followed by ``count`` Halton points pushed onto the unit sphere, deduplicated."""
    axes = np.vstack([np.eye(dimension), -np.eye(dimension)])
    sampler = qmc.Halton(d=dimension, scramble=False)
    sampler.fast_forward(seed + 1)
    cube = 2.0 * sampler.random(count) - 1.0 if count else np.zeros((0, dimension))
    norms = np.linalg.norm(cube, axis=1)
    cube = cube[norms > 1e-12] / norms[norms > 1e-12, None]
    directions: List[np.ndarray] = []
    for candidate in np.vstack([axes, cube]):
        if not any(np.allclose(candidate, seen, atol=1e-12) for seen in directions):
            directions.append(candidate)
    return np.array(directions)


def neighbourhood_sample(problem: VectorProblem, x_bar: np.ndarray, radius: float, budget: SamplingBudget) -> np.ndarray:
    """Feasible points drawn uniformly from the ball of ``radius`` around x̄ (x̄ itself excluded)."""
    rng = np.random.default_rng(budget.seed)
    gaussian = rng.standard_normal((budget.pair_count, problem.s))
    norms = np.linalg.norm(gaussian, axis=1)
    keep = norms > 0
    radii = radius * rng.uniform(size=budget.pair_count) ** (1.0 / problem.s)
    points = x_bar + (gaussian[keep] / norms[keep, None]) * radii[keep, None]
    points = points[np.any(points != x_bar, axis=1)]
    mask, _ = feasible_mask(problem, points)
    return points[mask]


def growth_constant(distances: np.ndarray, gains: np.ndarray, power: int, radius: float) -> float:
    """Largest ``ε <= radius`` with ``gain >= ε·distanceᵖ`` for every sample closer than ε.

    With the samples sorted by distance, ε in ``(r_k, r_{k+1}]`` must stay below
    the smallest ratio among the first ``k + 1`` samples.
    """
    defined = np.isfinite(gains)
    order = np.argsort(distances[defined], kind="stable")
    r = distances[defined][order]
    ratios = gains[defined][order] / r ** power
    if r.size == 0:
        return radius
    best = min(float(r[0]), radius)
    running = np.minimum.accumulate(ratios)
    upper = np.append(r[1:], radius)
    for k in range(r.size):
        if r[k] >= radius:
            break
        candidate = min(float(upper[k]), float(running[k]), radius)
        if candidate > r[k]:
            best = max(best, candidate)
    return best


def _empirical_epsilon(problem: VectorProblem, x_bar: np.ndarray, lam: np.ndarray, power: int,
                       radius: float, budget: SamplingBudget):
    points = neighbourhood_sample(problem, x_bar, radius, budget)
    gains = problem.objective_map.values_batch(points) @ lam - float(lam @ problem.objective_map.value(x_bar))
    distances = np.linalg.norm(points - x_bar, axis=1)
    epsilon = growth_constant(distances, gains, power, radius)
    logger.debug(f"growth constant of order {power} at {x_bar.tolist()}: {epsilon:.6g} over {len(points)} points")
    return epsilon, len(points)


def isolated_first_order_check(problem: VectorProblem, x_bar, lam, mu, budget: SamplingBudget = SamplingBudget(),
                               schedule: LimitSchedule = LimitSchedule(), direction_count: int = DEFAULT_DIRECTION_COUNT,
                               radius: float = DEFAULT_RADIUS) -> IsolationVerdict:
    """``λ·d⁻f(x̄,u) + μ·d⁻g(x̄,u) > δ`` on sampled unit directions.

    Lower Dini derivatives are estimated per component and then contracted
    with λ and μ; components with a zero coefficient are skipped.
    """
    if not radius > 0:
        raise ScheduleError(f"radius must be positive, got {radius}")
    anchor, lam, mu = _prepare(problem, x_bar, lam, mu)
    terms = [(weight, problem.objective_map, index) for index, weight in enumerate(lam) if weight]
    terms += [(weight, problem.constraint_map, index) for index, weight in enumerate(mu) if weight]
    directions = sphere_directions(problem.s, direction_count, schedule.seed)
    values = []
    for u in directions:
        total = sum(weight * dini_lower(component_function(mapping, index), anchor, u, schedule).value
                    for weight, mapping, index in terms)
        values.append(float(total))
    verdict = IsolationVerdict(1, directions.tolist(), values, problem.tolerances.margin, None, radius, 0)
    if verdict.certified:
        verdict.epsilon, verdict.neighbourhood_samples = _empirical_epsilon(problem, anchor, lam, 1, radius, budget)
    logger.info(f"first-order isolation at {anchor.tolist()}: {verdict.verdict}")
    return verdict


def isolated_second_order_check(problem: VectorProblem, x_bar, lam, mu, directions: Sequence[Sequence[float]],
                                budget: SamplingBudget = SamplingBudget(),
                                radius: float = DEFAULT_RADIUS) -> IsolationVerdict:
    """``λ·∇²f(x̄)(u,u) + μ·∇²g(x̄)(u,u) > δ`` on the supplied critical directions.

    Raises:
        InvalidMultiplierError: stationarity fails beyond tolerance
        DirectionOutsideConeError: a direction is zero or not critical
    """
    if not radius > 0:
        raise ScheduleError(f"radius must be positive, got {radius}")
    anchor, lam, mu = _prepare(problem, x_bar, lam, mu)
    point = evaluate(problem, anchor, order=2)
    stationarity = float(np.max(np.abs(lam @ point.jac_f + mu @ point.jac_g)))
    if stationarity > problem.tolerances.stationarity:
        raise InvalidMultiplierError(f"‖λ∇f(x̄) + μ∇g(x̄)‖ = {stationarity:.3e} exceeds the stationarity tolerance")
    cone = critical_cone(problem, anchor)
    units, values = [], []
    for direction in directions:
        u = np.asarray(direction, dtype=float).reshape(-1)
        norm = np.linalg.norm(u)
        if norm == 0 or not cone.contains(u):
            raise DirectionOutsideConeError(f"direction {u.tolist()} is not a nonzero critical direction at x̄={anchor.tolist()}")
        u = u / norm
        units.append(u.tolist())
        values.append(float(lam @ quadratic_forms(point.hess_f, u) + mu @ quadratic_forms(point.hess_g, u)))
    verdict = IsolationVerdict(2, units, values, problem.tolerances.margin, None, radius, 0)
    if verdict.certified:
        verdict.epsilon, verdict.neighbourhood_samples = _empirical_epsilon(problem, anchor, lam, 2, radius, budget)
    logger.info(f"second-order isolation at {anchor.tolist()}: {verdict.verdict}")
    return verdict
