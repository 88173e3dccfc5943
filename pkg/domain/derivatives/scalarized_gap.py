"""The scalarised gap function

    F(x) = max{ λ·[f(x) − f(x̄)] + μ·g(x)  |  (λ, μ) ∈ Λ }

with Λ parametrised by coefficients over the unit extreme rays of C* and K*:
``λ = Σ aᵢ rᵢ``, ``μ = Σ bⱼ qⱼ``, ``a, b >= 0``, ``Σa + Σb = 1``.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from domain.core.errors import InfeasiblePointError, LPFailureError
from domain.derivatives.directional_derivatives import (
    LimitSchedule,
    ScalarFunction,
    hadamard_lower,
    hadamard_second_lower,
)
from domain.lp.simplex import maximize
from domain.model.vector_problem import VectorProblem, is_feasible

logger = logging.getLogger(__name__)


def _require_feasible(problem: VectorProblem, x_bar) -> np.ndarray:
    point = problem.point(x_bar)
    if not is_feasible(problem, point):
        raise InfeasiblePointError(f"x̄={point.tolist()} is not feasible")
    return point


def gap_coefficients(problem: VectorProblem, x_bar: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Objective of the gap LP in coefficient space: ``(rᵢ·[f(x)−f(x̄)], qⱼ·g(x))``."""
    difference = problem.objective_map.value(x) - problem.objective_map.value(x_bar)
    return np.concatenate([problem.polar_c.generators @ difference, problem.polar_k.generators @ problem.constraint_map.value(x)])


def scalarized_gap(problem: VectorProblem, x_bar, x) -> float:
    """Exact F(x), solved as an LP over the coefficient simplex.

    Raises:
        InfeasiblePointError: x̄ is not feasible
        LPFailureError: the LP did not end optimal
    """
    anchor = _require_feasible(problem, x_bar)
    c = gap_coefficients(problem, anchor, problem.point(x))
    outcome = maximize(c, a_eq=np.ones((1, c.size)), b_eq=[1.0])
    if not outcome.optimal:
        raise LPFailureError(f"gap LP ended {outcome.status.value} over a compact polytope")
    return float(outcome.objective)


def scalarized_gap_batch(problem: VectorProblem, x_bar, points: np.ndarray) -> np.ndarray:
    """F at many points by vertex enumeration of the coefficient simplex; NaN where undefined."""
    return _vertex_maximum(problem, _require_feasible(problem, x_bar), points)


def _vertex_maximum(problem: VectorProblem, anchor: np.ndarray, points) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    differences = problem.objective_map.values_batch(points) - problem.objective_map.value(anchor)
    g_values = problem.constraint_map.values_batch(points)
    vertex_values = np.hstack([differences @ problem.polar_c.generators.T, g_values @ problem.polar_k.generators.T])
    return np.max(vertex_values, axis=1)


def gap_function(problem: VectorProblem, x_bar) -> ScalarFunction:
    anchor = _require_feasible(problem, x_bar)
    return lambda point: float(_vertex_maximum(problem, anchor, np.asarray(point)[None, :])[0])


@dataclass(frozen=True)
class GapDerivativeCheck:
    """Lower Hadamard derivatives of F at x̄ (second order with base functional 0)."""

    directions: List[List[float]]
    first_order: List[float]
    second_order: List[float]
    tolerance: float

    @property
    def min_first_order(self) -> Optional[float]:
        return min(self.first_order) if self.first_order else None

    @property
    def min_second_order(self) -> Optional[float]:
        return min(self.second_order) if self.second_order else None

    @property
    def holds(self) -> bool:
        return all(value >= -self.tolerance for value in self.first_order + self.second_order)

    def to_dict(self) -> dict:
        return {
            "directions": self.directions,
            "first_order": self.first_order,
            "second_order": self.second_order,
            "min_first_order": self.min_first_order,
            "min_second_order": self.min_second_order,
            "holds": self.holds,
        }


def gap_derivative_check(problem: VectorProblem, x_bar, directions: Sequence[Sequence[float]],
                         schedule: LimitSchedule = LimitSchedule()) -> GapDerivativeCheck:
    """Necessary condition at a weak local minimizer: ``d⁻F(x̄;u) >= 0`` and ``d²⁻F(x̄;0;u) >= 0``."""
    anchor = _require_feasible(problem, x_bar)
    gap = gap_function(problem, anchor)
    first, second, used = [], [], []
    for direction in directions:
        u = np.asarray(direction, dtype=float).reshape(-1)
        first.append(hadamard_lower(gap, anchor, u, schedule).value)
        second.append(hadamard_second_lower(gap, anchor, None, u, schedule).value)
        used.append(u.tolist())
    check = GapDerivativeCheck(used, first, second, problem.tolerances.membership)
    logger.debug(f"gap derivatives at {anchor.tolist()}: first {first}, second {second}")
    return check
