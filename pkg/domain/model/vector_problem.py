"""Cone-constrained vector optimization problems.

    minimize f(x) with respect to C   subject to   g(x) ∈ -K,  x ∈ X

``f`` and ``g`` are tuples of sympy expressions over the declared variables,
``C`` and ``K`` are :class:`PolyhedralCone` instances and ``X`` is an optional
axis-aligned :class:`DomainBox` (all of Rˢ when absent).
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, List, Optional, Protocol, Sequence, Tuple, runtime_checkable

import numpy as np
import sympy

from domain.cones.polyhedral_cone import PolarCone, PolyhedralCone
from domain.core.errors import (
    DimensionMismatchError,
    DomainViolationError,
    EvaluationError,
    NonsmoothPointError,
    NumericalOverflowError,
    ScheduleError,
)
from domain.core.tolerances import DEFAULT_TOLERANCES, Tolerances
from domain.model.expression import (
    compile_matrix,
    compile_vector,
    differentiate,
    kink_detector,
    make_symbols,
    nonsmooth_nodes,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DomainBox:
    """Axis-aligned box ``lower <= x <= upper`` standing in for the open set X."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape or lower.size == 0:
            raise DimensionMismatchError("box bounds must be nonempty vectors of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ScheduleError("box bounds must be finite")
        if np.any(lower >= upper):
            raise ScheduleError("every box interval needs lower < upper")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, dimension: int, lower: float = -1.0, upper: float = 1.0) -> "DomainBox":
        return cls(np.full(dimension, lower), np.full(dimension, upper))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def center(self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0

    def contains(self, x) -> bool:
        point = np.asarray(x, dtype=float)
        return bool(np.all(point >= self.lower) and np.all(point <= self.upper))

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        return np.all((points >= self.lower) & (points <= self.upper), axis=-1)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(count, self.dimension))

    def grid(self, points_per_axis: int) -> np.ndarray:
        """Full tensor lattice, row-major with the last coordinate varying fastest."""
        axes = [np.linspace(lo, hi, points_per_axis) for lo, hi in zip(self.lower, self.upper)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)

    def equals(self, other: Optional["DomainBox"]) -> bool:
        return other is not None and np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def to_list(self) -> List[List[float]]:
        return [[float(lo), float(hi)] for lo, hi in zip(self.lower, self.upper)]


@runtime_checkable
class DifferentiableMap(Protocol):
    """A map Rˢ → Rᵏ with first and second derivatives."""

    @property
    def dimension(self) -> int: ...

    @property
    def input_dimension(self) -> int: ...

    def value(self, x: np.ndarray) -> np.ndarray: ...

    def jacobian(self, x: np.ndarray) -> np.ndarray: ...

    def hessians(self, x: np.ndarray) -> np.ndarray: ...

    def values_batch(self, points: np.ndarray) -> np.ndarray: ...


def _finite(array: np.ndarray, what: str, x: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(array)):
        raise NumericalOverflowError(f"{what} is not finite at x={x.tolist()}")
    return array


class CompiledMap:
    """Vector of sympy expressions compiled to numpy callables.

    Derivative evaluations refuse points where an ``abs``/``norm`` kink is
    active; plain value evaluation is always allowed.
    """

    def __init__(self, expressions: Sequence[sympy.Expr], symbols: Sequence[sympy.Symbol], name: str = "h"):
        self.expressions = tuple(expressions)
        self.symbols = tuple(symbols)
        self.name = name
        self._active_kinks = kink_detector(nonsmooth_nodes(self.expressions), self.symbols)

    @property
    def dimension(self) -> int:
        return len(self.expressions)

    @property
    def input_dimension(self) -> int:
        return len(self.symbols)

    @cached_property
    def _value_fn(self) -> Callable:
        return compile_vector(self.expressions, self.symbols)

    @cached_property
    def _jacobian_fn(self) -> Callable:
        rows = [[differentiate(e, s) for s in self.symbols] for e in self.expressions]
        return compile_matrix(rows, self.symbols)

    @cached_property
    def _hessian_fns(self) -> List[Callable]:
        compiled = []
        for expression in self.expressions:
            gradient = [differentiate(expression, s) for s in self.symbols]
            rows = [[differentiate(partial, s) for s in self.symbols] for partial in gradient]
            compiled.append(compile_matrix(rows, self.symbols))
        return compiled

    def _call(self, fn: Callable, x: np.ndarray, shape: tuple, what: str) -> np.ndarray:
        try:
            with np.errstate(all="ignore"):
                raw = fn(*x)
            result = np.array(raw, dtype=float).reshape(shape)
        except (ArithmeticError, ValueError, TypeError) as error:
            raise EvaluationError(f"cannot evaluate {what} at x={x.tolist()}: {error}") from error
        return _finite(result, what, x)

    def _point(self, x) -> np.ndarray:
        point = np.asarray(x, dtype=float).reshape(-1)
        if point.size != self.input_dimension:
            raise DimensionMismatchError(f"{self.name} takes {self.input_dimension} variables, got {point.size}")
        return point

    def active_kinks(self, x) -> List[str]:
        return self._active_kinks(self._point(x))

    def _require_smooth(self, x: np.ndarray):
        active = self._active_kinks(x)
        if active:
            raise NonsmoothPointError(f"{self.name} is not differentiable at x={x.tolist()}: kink of {', '.join(active)}")

    def value(self, x) -> np.ndarray:
        point = self._point(x)
        return self._call(self._value_fn, point, (self.dimension,), f"{self.name}(x)")

    def jacobian(self, x) -> np.ndarray:
        point = self._point(x)
        self._require_smooth(point)
        return self._call(self._jacobian_fn, point, (self.dimension, self.input_dimension), f"∇{self.name}(x)")

    def hessians(self, x) -> np.ndarray:
        point = self._point(x)
        self._require_smooth(point)
        size = self.input_dimension
        stacked = np.array([self._call(fn, point, (size, size), f"∇²{self.name}(x)") for fn in self._hessian_fns])
        return (stacked + np.transpose(stacked, (0, 2, 1))) / 2.0

    def values_batch(self, points: np.ndarray) -> np.ndarray:
        """Values at many points; rows where evaluation is undefined are NaN."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        count = points.shape[0]
        with np.errstate(all="ignore"):
            raw = self._value_fn(*points.T)
        columns = [np.broadcast_to(np.asarray(component, dtype=float), (count,)) for component in raw]
        values = np.stack(columns, axis=1)
        values[~np.all(np.isfinite(values), axis=1)] = np.nan
        return values


class WeightedMap:
    """Scalarisation ``x -> w·h(x)`` of a vector map, itself a one-component map."""

    def __init__(self, base: DifferentiableMap, weights: Sequence[float]):
        self.base = base
        self.weights = np.asarray(weights, dtype=float).reshape(-1)
        if self.weights.size != base.dimension:
            raise DimensionMismatchError(f"{self.weights.size} weights for a map with {base.dimension} components")

    @property
    def dimension(self) -> int:
        return 1

    @property
    def input_dimension(self) -> int:
        return self.base.input_dimension

    def value(self, x) -> np.ndarray:
        return np.array([self.weights @ self.base.value(x)])

    def jacobian(self, x) -> np.ndarray:
        return (self.weights @ self.base.jacobian(x)).reshape(1, -1)

    def hessians(self, x) -> np.ndarray:
        return np.tensordot(self.weights, self.base.hessians(x), axes=1)[None, :, :]

    def values_batch(self, points: np.ndarray) -> np.ndarray:
        return (self.base.values_batch(points) @ self.weights).reshape(-1, 1)


@dataclass(frozen=True, eq=False)
class VectorProblem:
    """Problem (P): minimize f w.r.t. C subject to g(x) ∈ -K on X."""

    variables: Tuple[str, ...]
    objectives: Tuple[sympy.Expr, ...]
    constraints: Tuple[sympy.Expr, ...]
    cone_c: PolyhedralCone
    cone_k: PolyhedralCone
    domain_box: Optional[DomainBox] = None
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "objectives", tuple(sympy.sympify(e) for e in self.objectives))
        object.__setattr__(self, "constraints", tuple(sympy.sympify(e) for e in self.constraints))
        if not self.variables or not self.objectives or not self.constraints:
            raise DimensionMismatchError("a problem needs at least one variable, objective and constraint")
        if len(set(self.variables)) != len(self.variables):
            raise DimensionMismatchError(f"duplicate variable names in {self.variables}")
        declared = set(self.symbols)
        for expression in self.objectives + self.constraints:
            stray = expression.free_symbols - declared
            if stray:
                names = ", ".join(sorted(str(s) for s in stray))
                raise DimensionMismatchError(f"expression {expression} uses undeclared variables {names}")
        if self.cone_c.ambient_dim != self.n:
            raise DimensionMismatchError(f"cone C lives in R^{self.cone_c.ambient_dim} but f has {self.n} components")
        if self.cone_k.ambient_dim != self.m:
            raise DimensionMismatchError(f"cone K lives in R^{self.cone_k.ambient_dim} but g has {self.m} components")
        if self.domain_box is not None and self.domain_box.dimension != self.s:
            raise DimensionMismatchError(f"box has {self.domain_box.dimension} intervals for {self.s} variables")

    @property
    def s(self) -> int:
        return len(self.variables)

    @property
    def n(self) -> int:
        return len(self.objectives)

    @property
    def m(self) -> int:
        return len(self.constraints)

    @cached_property
    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return make_symbols(self.variables)

    @cached_property
    def objective_map(self) -> CompiledMap:
        return CompiledMap(self.objectives, self.symbols, "f")

    @cached_property
    def constraint_map(self) -> CompiledMap:
        return CompiledMap(self.constraints, self.symbols, "g")

    @cached_property
    def polar_c(self) -> PolarCone:
        return self.cone_c.polar()

    @cached_property
    def polar_k(self) -> PolarCone:
        return self.cone_k.polar()

    @cached_property
    def nonsmooth_nodes(self) -> List[sympy.Expr]:
        return nonsmooth_nodes(self.objectives + self.constraints)

    @property
    def is_smooth(self) -> bool:
        return not self.nonsmooth_nodes

    def with_tolerances(self, tolerances: Tolerances) -> "VectorProblem":
        return VectorProblem(
            self.variables, self.objectives, self.constraints,
            self.cone_c, self.cone_k, self.domain_box, tolerances,
        )

    def point(self, x) -> np.ndarray:
        """Validate and convert a candidate point to a float vector."""
        vector = np.asarray(x, dtype=float).reshape(-1)
        if vector.size != self.s:
            raise DimensionMismatchError(f"point has {vector.size} coordinates, problem has {self.s} variables")
        return vector

    def structurally_equal(self, other: "VectorProblem") -> bool:
        same_box = (self.domain_box is None and other.domain_box is None) or (
            self.domain_box is not None and self.domain_box.equals(other.domain_box)
        )
        return (
            self.variables == other.variables
            and self.objectives == other.objectives
            and self.constraints == other.constraints
            and self.cone_c.equivalent(other.cone_c)
            and self.cone_k.equivalent(other.cone_k)
            and same_box
            and self.tolerances == other.tolerances
        )


@dataclass(frozen=True)
class EvaluatedPoint:
    """Values and derivatives of f and g at one point (derivatives up to ``order``)."""

    x: np.ndarray
    order: int
    f_val: np.ndarray
    g_val: np.ndarray
    jac_f: Optional[np.ndarray] = None
    jac_g: Optional[np.ndarray] = None
    hess_f: Optional[np.ndarray] = None
    hess_g: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        data = {"x": self.x.tolist(), "f": self.f_val.tolist(), "g": self.g_val.tolist()}
        if self.order >= 1:
            data.update({"jac_f": self.jac_f.tolist(), "jac_g": self.jac_g.tolist()})
        if self.order >= 2:
            data.update({"hess_f": self.hess_f.tolist(), "hess_g": self.hess_g.tolist()})
        return data


def evaluate(problem: VectorProblem, x, order: int = 2) -> EvaluatedPoint:
    """Evaluate f, g and their derivatives up to ``order`` at ``x``.

    Raises:
        DomainViolationError: x outside the domain box
        NonsmoothPointError: order >= 1 at an active abs/norm kink
        NumericalOverflowError: any non-finite value
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    point = problem.point(x)
    if problem.domain_box is not None and not problem.domain_box.contains(point):
        raise DomainViolationError(f"x={point.tolist()} lies outside the domain box {problem.domain_box.to_list()}")
    f_map, g_map = problem.objective_map, problem.constraint_map
    result = {"f_val": f_map.value(point), "g_val": g_map.value(point)}
    if order >= 1:
        result.update(jac_f=f_map.jacobian(point), jac_g=g_map.jacobian(point))
    if order >= 2:
        result.update(hess_f=f_map.hessians(point), hess_g=g_map.hessians(point))
    return EvaluatedPoint(x=point, order=order, **result)


def is_feasible(problem: VectorProblem, x) -> bool:
    """``x ∈ S``, i.e. x in the box and ``-g(x) ∈ K``."""
    point = problem.point(x)
    if problem.domain_box is not None and not problem.domain_box.contains(point):
        logger.debug(f"x={point.tolist()} is outside the domain box")
        return False
    return problem.cone_k.contains(-problem.constraint_map.value(point), problem.tolerances.membership)


def feasible_mask(problem: VectorProblem, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised feasibility; returns ``(mask, g values)`` (undefined rows are infeasible)."""
    g_values = problem.constraint_map.values_batch(points)
    defined = np.all(np.isfinite(g_values), axis=1)
    mask = np.zeros(len(points), dtype=bool)
    mask[defined] = problem.cone_k.contains_many(-g_values[defined], problem.tolerances.membership)
    if problem.domain_box is not None:
        mask &= problem.domain_box.contains_many(points)
    return mask, g_values


def _relative_deviation(symbolic: np.ndarray, approximate: np.ndarray) -> float:
    if symbolic.size == 0:
        return 0.0
    return float(np.max(np.abs(symbolic - approximate) / np.maximum(1.0, np.abs(symbolic))))


def finite_difference_check(problem: VectorProblem, x, step: float = 1e-5) -> float:
    """Max relative deviation between symbolic and central-difference derivatives.

    Jacobians are compared against central differences of values, Hessians
    against central differences of the symbolic Jacobian. Deviation of an
    entry is ``|sym - fd| / max(1, |sym|)``.
    """
    if not step > 0:
        raise ScheduleError(f"finite-difference step must be positive, got {step}")
    point = problem.point(x)
    deviation = 0.0
    for mapping in (problem.objective_map, problem.constraint_map):
        jacobian = mapping.jacobian(point)
        hessians = mapping.hessians(point)
        fd_jacobian = np.zeros_like(jacobian)
        fd_hessians = np.zeros_like(hessians)
        for axis in range(problem.s):
            offset = np.zeros(problem.s)
            offset[axis] = step
            fd_jacobian[:, axis] = (mapping.value(point + offset) - mapping.value(point - offset)) / (2.0 * step)
            fd_hessians[:, :, axis] = (mapping.jacobian(point + offset) - mapping.jacobian(point - offset)) / (2.0 * step)
        deviation = max(deviation, _relative_deviation(jacobian, fd_jacobian), _relative_deviation(hessians, fd_hessians))
    logger.debug(f"finite-difference deviation at {point.tolist()} with step {step}: {deviation:.3e}")
    return deviation
