"""Sampling falsifiers for generalised convexity.

Each falsifier walks the pairs of a :class:`SamplingBudget` in order and
returns the first pair at which an implication of the definition fails, or
``None`` ("not falsified within budget"). Antecedents must hold with the
configured tolerance; consequents count as failed only when they fail at
zero tolerance, so every reported witness re-verifies.

Consequents are evaluated on the unit direction ``(x − x̄)/‖x − x̄‖``; cone
membership and the signs involved are invariant under positive scaling.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np

from domain.cones.polyhedral_cone import PolyhedralCone
from domain.core.errors import DimensionMismatchError
from domain.core.tolerances import DEFAULT_TOLERANCES, Tolerances
from domain.model.vector_problem import DifferentiableMap
from domain.sufficiency.pair_sampler import SamplingBudget, sample_pairs, sample_points

logger = logging.getLogger(__name__)

PSEUDOCONVEX = "pseudoconvex"
STRICTLY_PSEUDOCONVEX = "strictly pseudoconvex"
SECOND_ORDER_PSEUDOCONVEX = "second-order pseudoconvex"
SECOND_ORDER_STRICTLY_PSEUDOCONVEX = "second-order strictly pseudoconvex"

# (violated clause, antecedent value, consequent value)
PairViolation = Tuple[str, float, float]
# rows of (anchors, points) -> mask of admissible pairs
PairFilter = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ConvexityWitness:
    """A pair (x̄, x) at which ``definition`` fails.

    ``antecedent_value`` is the margin by which the hypothesis holds (cone
    margin of ``f(x̄) − f(x)``, or ``h(x̄) − h(x)`` for scalar definitions);
    ``consequent_value`` is the measured left side of the failed conclusion.
    """

    x_bar: Tuple[float, ...]
    x: Tuple[float, ...]
    definition: str
    violated_clause: str
    antecedent_value: float
    consequent_value: float

    def to_dict(self) -> dict:
        return {
            "x_bar": list(self.x_bar),
            "x": list(self.x),
            "definition": self.definition,
            "violated_clause": self.violated_clause,
            "antecedent_value": self.antecedent_value,
            "consequent_value": self.consequent_value,
        }


class _DerivativeCache:
    """Jacobians and Hessians at anchors; lattice anchors repeat many times."""

    def __init__(self, mapping: DifferentiableMap):
        self.mapping = mapping
        self._jacobians: Dict[bytes, np.ndarray] = {}
        self._hessians: Dict[bytes, np.ndarray] = {}

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        key = x.tobytes()
        if key not in self._jacobians:
            self._jacobians[key] = self.mapping.jacobian(x)
        return self._jacobians[key]

    def hessians(self, x: np.ndarray) -> np.ndarray:
        key = x.tobytes()
        if key not in self._hessians:
            self._hessians[key] = self.mapping.hessians(x)
        return self._hessians[key]


def _unit(x_bar: np.ndarray, x: np.ndarray) -> np.ndarray:
    direction = x - x_bar
    return direction / np.linalg.norm(direction)


def _require_scalar(mapping: DifferentiableMap):
    if mapping.dimension != 1:
        raise DimensionMismatchError(f"scalar function expected, got a map with {mapping.dimension} components")


def _pseudoconvex_pair(cache: _DerivativeCache, cone: PolyhedralCone, x_bar, x, tol: Tolerances) -> Optional[PairViolation]:
    f = cache.mapping
    antecedent = float(np.min(cone.margins(f.value(x_bar) - f.value(x))))
    if not antecedent > tol.strict:
        return None
    consequent = float(np.min(cone.margins(-cache.jacobian(x_bar) @ _unit(x_bar, x))))
    return ("i", antecedent, consequent) if consequent <= 0.0 else None


def _strict_pair(cache: _DerivativeCache, cone, x_bar, x, tol: Tolerances) -> Optional[PairViolation]:
    h = cache.mapping
    antecedent = float(h.value(x_bar)[0] - h.value(x)[0])
    if not antecedent >= 0.0:
        return None
    gradient = cache.jacobian(x_bar)[0]
    slope = float(gradient @ _unit(x_bar, x))
    return ("i", antecedent, slope) if slope >= 0.0 else None


def _second_order_pair(cache: _DerivativeCache, cone: PolyhedralCone, x_bar, x, tol: Tolerances) -> Optional[PairViolation]:
    f = cache.mapping
    antecedent = float(np.min(cone.margins(f.value(x_bar) - f.value(x))))
    if not antecedent > tol.strict:
        return None
    unit = _unit(x_bar, x)
    first = float(np.min(cone.margins(-cache.jacobian(x_bar) @ unit)))
    if first < 0.0:
        return "i", antecedent, first
    if first > 0.0:
        return None
    curvature = np.einsum("i,kij,j->k", unit, cache.hessians(x_bar), unit)
    second = float(np.min(cone.margins(-curvature)))
    return ("ii", antecedent, second) if second <= 0.0 else None


def _second_order_strict_pair(cache: _DerivativeCache, cone, x_bar, x, tol: Tolerances) -> Optional[PairViolation]:
    h = cache.mapping
    antecedent = float(h.value(x_bar)[0] - h.value(x)[0])
    if not antecedent >= 0.0:
        return None
    gradient = cache.jacobian(x_bar)[0]
    unit = _unit(x_bar, x)
    slope = float(gradient @ unit)
    if slope > 0.0:
        return "i", antecedent, slope
    if slope < 0.0:
        return None
    curvature = float(unit @ cache.hessians(x_bar)[0] @ unit)
    return ("ii", antecedent, curvature) if curvature >= 0.0 else None


PAIR_CHECKS = {
    PSEUDOCONVEX: _pseudoconvex_pair,
    STRICTLY_PSEUDOCONVEX: _strict_pair,
    SECOND_ORDER_PSEUDOCONVEX: _second_order_pair,
    SECOND_ORDER_STRICTLY_PSEUDOCONVEX: _second_order_strict_pair,
}


def _candidates(mapping: DifferentiableMap, cone: Optional[PolyhedralCone], anchors: np.ndarray, points: np.ndarray,
                tol: Tolerances) -> np.ndarray:
    """Vectorised antecedent screen; NaN rows never pass."""
    differences = mapping.values_batch(anchors) - mapping.values_batch(points)
    if cone is None:
        return differences[:, 0] >= 0.0
    return cone.interior_contains_many(differences, tol.strict)


def _pairs(mapping: DifferentiableMap, budget: SamplingBudget, anchor) -> Iterable[Tuple[np.ndarray, np.ndarray]]:
    box = budget.resolve_box(mapping.input_dimension)
    if anchor is None:
        return sample_pairs(budget, box)
    fixed = np.asarray(anchor, dtype=float).reshape(-1)
    if fixed.size != mapping.input_dimension:
        raise DimensionMismatchError(f"anchor in R^{fixed.size}, function on R^{mapping.input_dimension}")
    return ((np.broadcast_to(fixed, points.shape), points) for points in sample_points(budget, box, fixed))


def _falsify(definition: str, mapping: DifferentiableMap, cone: Optional[PolyhedralCone], budget: SamplingBudget,
             tolerances: Tolerances, anchor=None, admissible: Optional[PairFilter] = None) -> Optional[ConvexityWitness]:
    check = PAIR_CHECKS[definition]
    cache = _DerivativeCache(mapping)
    examined = 0
    for anchors, points in _pairs(mapping, budget, anchor):
        mask = _candidates(mapping, cone, anchors, points, tolerances)
        if admissible is not None:
            mask &= admissible(anchors, points)
        examined += len(points)
        for index in np.flatnonzero(mask):
            x_bar, x = np.array(anchors[index]), np.array(points[index])
            violation = check(cache, cone, x_bar, x, tolerances)
            if violation is not None:
                clause, antecedent, consequent = violation
                logger.debug(f"{definition} fails (clause {clause}) at x̄={x_bar.tolist()}, x={x.tolist()}")
                return ConvexityWitness(tuple(x_bar.tolist()), tuple(x.tolist()), definition, clause, antecedent, consequent)
    logger.debug(f"{definition}: no witness among {examined} pairs")
    return None


def falsify_pseudoconvex(f_map: DifferentiableMap, cone: PolyhedralCone, budget: SamplingBudget = SamplingBudget(),
                         tolerances: Tolerances = DEFAULT_TOLERANCES, anchor=None,
                         admissible: Optional[PairFilter] = None) -> Optional[ConvexityWitness]:
    """Pair with ``f(x) ∈ f(x̄) − int C`` but ``∇f(x̄)(x − x̄) ∉ −int C``.

    Args:
        anchor: fix x̄ and sample only x
        admissible: extra pair filter applied before the consequent is tested
    """
    if f_map.dimension != cone.ambient_dim:
        raise DimensionMismatchError(f"map with {f_map.dimension} components ordered by a cone in R^{cone.ambient_dim}")
    return _falsify(PSEUDOCONVEX, f_map, cone, budget, tolerances, anchor, admissible)


def falsify_strict_pseudoconvex(h_map: DifferentiableMap, budget: SamplingBudget = SamplingBudget(),
                                tolerances: Tolerances = DEFAULT_TOLERANCES, anchor=None,
                                admissible: Optional[PairFilter] = None) -> Optional[ConvexityWitness]:
    """Pair with ``h(x) <= h(x̄)`` but ``∇h(x̄)(x − x̄) >= 0``."""
    _require_scalar(h_map)
    return _falsify(STRICTLY_PSEUDOCONVEX, h_map, None, budget, tolerances, anchor, admissible)


def falsify_second_order_pseudoconvex(f_map: DifferentiableMap, cone: PolyhedralCone,
                                      budget: SamplingBudget = SamplingBudget(),
                                      tolerances: Tolerances = DEFAULT_TOLERANCES, anchor=None,
                                      admissible: Optional[PairFilter] = None) -> Optional[ConvexityWitness]:
    """Clause (i): ``∇f(x̄)d ∈ −C``; clause (ii): on the boundary, ``dᵀ∇²f(x̄)d ∈ −int C``."""
    if f_map.dimension != cone.ambient_dim:
        raise DimensionMismatchError(f"map with {f_map.dimension} components ordered by a cone in R^{cone.ambient_dim}")
    return _falsify(SECOND_ORDER_PSEUDOCONVEX, f_map, cone, budget, tolerances, anchor, admissible)


def falsify_second_order_strict_pseudoconvex(h_map: DifferentiableMap, budget: SamplingBudget = SamplingBudget(),
                                             tolerances: Tolerances = DEFAULT_TOLERANCES, anchor=None,
                                             admissible: Optional[PairFilter] = None) -> Optional[ConvexityWitness]:
    """Clause (i): ``∇h(x̄)d <= 0``; clause (ii): with equality, ``dᵀ∇²h(x̄)d < 0``."""
    _require_scalar(h_map)
    return _falsify(SECOND_ORDER_STRICTLY_PSEUDOCONVEX, h_map, None, budget, tolerances, anchor, admissible)


def recheck_witness(witness: ConvexityWitness, mapping: DifferentiableMap, cone: Optional[PolyhedralCone] = None,
                    tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Re-evaluate the witness pair from scratch; True when the same clause still fails."""
    check = PAIR_CHECKS.get(witness.definition)
    if check is None:
        return False
    x_bar = np.asarray(witness.x_bar, dtype=float)
    x = np.asarray(witness.x, dtype=float)
    if np.array_equal(x_bar, x):
        return False
    violation = check(_DerivativeCache(mapping), cone, x_bar, x, tolerances)
    return violation is not None and violation[0] == witness.violated_clause
