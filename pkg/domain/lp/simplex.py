"""Dense two-phase simplex method with Bland's anti-cycling rule.

Every LP is stated as a maximisation::

    maximize    c·z
    subject to  A_ub z <= b_ub,   A_eq z = b_eq,
                z_j >= 0 unless ``free[j]``.

Pivoting is fully deterministic: the entering column is the smallest index
with positive reduced cost and ratio-test ties go to the smallest basic
variable index.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from domain.core.errors import DimensionMismatchError, LPFailureError, LPIterationLimitError

logger = logging.getLogger(__name__)

DEFAULT_ITERATION_LIMIT = 100_000
PIVOT_TOLERANCE = 1e-11
REDUCED_COST_TOLERANCE = 1e-11
PHASE_ONE_TOLERANCE = 1e-9
REPLACEMENT_TOLERANCE = 1e-9


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _matrix(values, columns: int, name: str) -> np.ndarray:
    if values is None:
        return np.zeros((0, columns))
    matrix = np.atleast_2d(np.asarray(values, dtype=float))
    if matrix.size == 0:
        return np.zeros((0, columns))
    if matrix.shape[1] != columns:
        raise DimensionMismatchError(f"{name} has {matrix.shape[1]} columns, expected {columns}")
    return matrix


def _vector(values, size: int, name: str) -> np.ndarray:
    vector = np.zeros(0) if values is None else np.asarray(values, dtype=float).reshape(-1)
    if vector.size != size:
        raise DimensionMismatchError(f"{name} has {vector.size} entries, expected {size}")
    return vector


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    a_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    a_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    free: Optional[np.ndarray] = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        size = c.size
        a_ub = _matrix(self.a_ub, size, "A_ub")
        a_eq = _matrix(self.a_eq, size, "A_eq")
        b_ub = _vector(self.b_ub, a_ub.shape[0], "b_ub")
        b_eq = _vector(self.b_eq, a_eq.shape[0], "b_eq")
        free = np.zeros(size, dtype=bool) if self.free is None else np.asarray(self.free, dtype=bool).reshape(-1)
        if free.size != size:
            raise DimensionMismatchError(f"free mask has {free.size} entries, expected {size}")
        for name, array in (("c", c), ("A_ub", a_ub), ("b_ub", b_ub), ("A_eq", a_eq), ("b_eq", b_eq)):
            if not np.all(np.isfinite(array)):
                raise ValueError(f"LP data {name} contains non-finite entries")
        for name, value in (("c", c), ("a_ub", a_ub), ("b_ub", b_ub), ("a_eq", a_eq), ("b_eq", b_eq), ("free", free)):
            object.__setattr__(self, name, value)

    @property
    def variable_count(self) -> int:
        return self.c.size

    def violation(self, z: np.ndarray) -> float:
        """Largest violation of any constraint or sign restriction at ``z``."""
        parts = [0.0]
        if self.a_ub.shape[0]:
            parts.append(float(np.max(self.a_ub @ z - self.b_ub)))
        if self.a_eq.shape[0]:
            parts.append(float(np.max(np.abs(self.a_eq @ z - self.b_eq))))
        bounded = ~self.free
        if np.any(bounded):
            parts.append(float(np.max(-z[bounded])))
        return max(parts)


@dataclass(frozen=True)
class LPOutcome:
    status: LPStatus
    z: Optional[np.ndarray]
    objective: Optional[float]
    max_violation: float
    pivots: int

    @property
    def optimal(self) -> bool:
        return self.status == LPStatus.OPTIMAL


class _Tableau:
    """Dense tableau ``[B⁻¹A | B⁻¹b]`` with a reduced-cost row."""

    def __init__(self, a: np.ndarray, b: np.ndarray, basis: List[int], limit: int):
        self.table = np.hstack([a, b.reshape(-1, 1)])
        self.basis = list(basis)
        self.costs = np.zeros(a.shape[1] + 1)
        self.pivots = 0
        self.limit = limit

    def set_objective(self, c: np.ndarray):
        self.costs = np.append(c, 0.0).astype(float)
        for row, column in enumerate(self.basis):
            self.costs -= self.costs[column] * self.table[row]

    @property
    def value(self) -> float:
        return -float(self.costs[-1])

    def pivot(self, row: int, column: int):
        self.pivots += 1
        if self.pivots > self.limit:
            raise LPIterationLimitError(f"simplex exceeded {self.limit} pivots")
        self.table[row] /= self.table[row, column]
        for other in range(self.table.shape[0]):
            if other != row and self.table[other, column] != 0.0:
                self.table[other] -= self.table[other, column] * self.table[row]
        self.costs -= self.costs[column] * self.table[row]
        self.basis[row] = column

    def optimise(self, allowed: int) -> bool:
        """Run Bland pivots over the first ``allowed`` columns; False when unbounded."""
        while True:
            entering = next((j for j in range(allowed) if self.costs[j] > REDUCED_COST_TOLERANCE), None)
            if entering is None:
                return True
            column = self.table[:, entering]
            candidates = [i for i in range(self.table.shape[0]) if column[i] > PIVOT_TOLERANCE]
            if not candidates:
                return False
            ratios = [self.table[i, -1] / column[i] for i in candidates]
            best = min(ratios)
            leaving = min(
                (i for i, ratio in zip(candidates, ratios) if ratio <= best + PIVOT_TOLERANCE),
                key=lambda i: self.basis[i],
            )
            self.pivot(leaving, entering)

    def drop_row(self, row: int):
        self.table = np.delete(self.table, row, axis=0)
        del self.basis[row]


def _standard_form(lp: LinearProgram):
    """Rows ``A' z' = b'`` with ``z' >= 0`` and ``b' >= 0``; also the column map back to z."""
    free_columns = np.flatnonzero(lp.free)
    split = np.hstack([np.eye(lp.variable_count), -np.eye(lp.variable_count)[:, free_columns]])
    rows_ub = lp.a_ub @ split
    rows_eq = lp.a_eq @ split
    slack_count = rows_ub.shape[0]
    a = np.vstack([
        np.hstack([rows_ub, np.eye(slack_count)]),
        np.hstack([rows_eq, np.zeros((rows_eq.shape[0], slack_count))]),
    ])
    b = np.concatenate([lp.b_ub, lp.b_eq])
    negative = b < 0
    a[negative] *= -1.0
    b[negative] *= -1.0
    c = np.concatenate([lp.c @ split, np.zeros(slack_count)])
    return a, b, c, split


def solve(lp: LinearProgram, iteration_limit: int = DEFAULT_ITERATION_LIMIT) -> LPOutcome:
    """Solve ``lp`` by the two-phase simplex method.

    Raises:
        LPIterationLimitError: more than ``iteration_limit`` pivots in total
    """
    a, b, c, split = _standard_form(lp)
    rows, columns = a.shape
    tableau = _Tableau(np.hstack([a, np.eye(rows)]), b, list(range(columns, columns + rows)), iteration_limit)
    tableau.set_objective(np.concatenate([np.zeros(columns), -np.ones(rows)]))
    tableau.optimise(columns + rows)
    scale = max(1.0, float(np.max(b))) if rows else 1.0
    if tableau.value < -PHASE_ONE_TOLERANCE * scale:
        logger.debug(f"phase one ended with infeasibility {-tableau.value:.3e} after {tableau.pivots} pivots")
        return LPOutcome(LPStatus.INFEASIBLE, None, None, -tableau.value, tableau.pivots)

    for row in reversed(range(rows)):
        if tableau.basis[row] < columns:
            continue
        magnitudes = np.abs(tableau.table[row, :columns])
        if magnitudes.size == 0 or magnitudes.max() <= REPLACEMENT_TOLERANCE:
            tableau.drop_row(row)
        else:
            tableau.pivot(row, int(np.argmax(magnitudes)))
    tableau.table = np.delete(tableau.table, np.s_[columns:columns + rows], axis=1)
    if any(column >= columns for column in tableau.basis):
        raise LPFailureError("artificial variable left in the basis after phase one")

    tableau.set_objective(c)
    if not tableau.optimise(columns):
        logger.debug(f"LP unbounded after {tableau.pivots} pivots")
        return LPOutcome(LPStatus.UNBOUNDED, None, None, 0.0, tableau.pivots)

    standard = np.zeros(columns)
    for row, column in enumerate(tableau.basis):
        standard[column] = tableau.table[row, -1]
    z = split @ standard[:split.shape[1]]
    logger.debug(f"LP optimal after {tableau.pivots} pivots, objective {tableau.value:.6g}")
    return LPOutcome(LPStatus.OPTIMAL, z, float(lp.c @ z), lp.violation(z), tableau.pivots)


def maximize(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, free=None,
             iteration_limit: int = DEFAULT_ITERATION_LIMIT) -> LPOutcome:
    return solve(LinearProgram(c, a_ub, b_ub, a_eq, b_eq, free), iteration_limit)
