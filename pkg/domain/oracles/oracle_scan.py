"""Brute-force oracles for weak efficiency.

A point x dominates x̄ when it is feasible and ``f(x̄) − f(x)`` lies in
``int C`` with margin above the strict tolerance. A dominator found on a grid
proves that x̄ is not weakly efficient; finding none is only evidence.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterator, List, Optional

import numpy as np

from domain.core.errors import InfeasiblePointError, ScheduleError
from domain.model.vector_problem import DomainBox, VectorProblem, feasible_mask, is_feasible

logger = logging.getLogger(__name__)

GRID = "grid"
RANDOM = "random"

DEFAULT_POINTS_PER_AXIS = 41
DEFAULT_SAMPLE_CAP = 1_000_000
DEFAULT_GLOBAL_COUNT = 100_000
CHUNK = 65_536


def _odd_within(points_per_axis: int, dimension: int, cap: int) -> int:
    """Largest odd count ``<= points_per_axis`` whose lattice fits in ``cap`` points (at least 1)."""
    size = points_per_axis if points_per_axis % 2 else points_per_axis - 1
    while size > 1 and size ** dimension > cap:
        size -= 2
    return max(size, 1)


def _lattice(box: DomainBox, points_per_axis: int, cap: int) -> np.ndarray:
    size = _odd_within(points_per_axis, box.dimension, cap)
    if size != points_per_axis:
        logger.warning(f"lattice reduced from {points_per_axis} to {size} points per axis to stay within {cap} samples")
    return box.center[None, :] if size == 1 else box.grid(size)


@dataclass(frozen=True)
class ScanGrid:
    """Sample of the cube of half-width ``radius`` around ``center``.

    ``mode`` is ``"grid"`` (tensor lattice, odd points per axis so the
    centre is a node) or ``"random"`` (``count`` seeded uniform points).
    """

    center: tuple
    radius: float
    points_per_axis: int = DEFAULT_POINTS_PER_AXIS
    cap: int = DEFAULT_SAMPLE_CAP
    mode: str = GRID
    count: int = 10_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in np.asarray(self.center, dtype=float).reshape(-1)))
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ScheduleError(f"scan radius must be positive, got {self.radius}")
        if self.points_per_axis < 1 or self.cap < 1 or self.count < 1:
            raise ScheduleError("points per axis, sample cap and count must be positive")
        if self.mode not in (GRID, RANDOM):
            raise ScheduleError(f"unknown scan mode '{self.mode}'")

    @property
    def box(self) -> DomainBox:
        center = np.array(self.center)
        return DomainBox(center - self.radius, center + self.radius)

    def points(self) -> np.ndarray:
        if self.mode == RANDOM:
            rng = np.random.default_rng(self.seed)
            return self.box.sample(rng, min(self.count, self.cap))
        return _lattice(self.box, self.points_per_axis, self.cap)

    def to_dict(self) -> dict:
        return {
            "center": list(self.center),
            "radius": self.radius,
            "points_per_axis": self.points_per_axis,
            "cap": self.cap,
            "mode": self.mode,
            "count": self.count,
            "seed": self.seed,
        }


@dataclass
class ScanResult:
    weakly_efficient: bool
    dominator: Optional[List[float]]
    domination_margin: Optional[float]
    points_examined: int
    feasible_points: int
    scope: str

    def to_dict(self) -> dict:
        return {
            "verdict": self.weakly_efficient,
            "dominator": self.dominator,
            "domination_margin": self.domination_margin,
            "points_examined": self.points_examined,
            "feasible_points": self.feasible_points,
            "scope": self.scope,
        }


def _chunks(points: np.ndarray) -> Iterator[np.ndarray]:
    for start in range(0, len(points), CHUNK):
        yield points[start:start + CHUNK]


def _scan(problem: VectorProblem, x_bar, batches: Iterator[np.ndarray], scope: str) -> ScanResult:
    anchor = problem.point(x_bar)
    if not is_feasible(problem, anchor):
        raise InfeasiblePointError(f"x̄={anchor.tolist()} is not feasible")
    f_bar = problem.objective_map.value(anchor)
    tol = problem.tolerances
    examined = feasible = 0
    best_margin, best_point = -np.inf, None
    for points in batches:
        mask, _ = feasible_mask(problem, points)
        examined += len(points)
        feasible += int(mask.sum())
        if not mask.any():
            continue
        candidates = points[mask]
        margins = np.min(problem.cone_c.margins(f_bar - problem.objective_map.values_batch(candidates)), axis=1)
        margins = np.where(np.isfinite(margins), margins, -np.inf)
        index = int(np.argmax(margins))
        if margins[index] > tol.strict and margins[index] > best_margin:
            best_margin, best_point = float(margins[index]), candidates[index]
    result = ScanResult(
        weakly_efficient=best_point is None,
        dominator=None if best_point is None else best_point.tolist(),
        domination_margin=None if best_point is None else best_margin,
        points_examined=examined,
        feasible_points=feasible,
        scope=scope,
    )
    logger.debug(f"{scope} scan at {anchor.tolist()}: {examined} points, {feasible} feasible, dominator {result.dominator}")
    return result


def weak_local_min_oracle(problem: VectorProblem, x_bar, grid: ScanGrid) -> ScanResult:
    """False (with the strongest dominator) iff a sampled feasible x has ``f(x̄) − f(x) ∈ int C``."""
    return _scan(problem, x_bar, _chunks(grid.points()), "local")


def weak_global_scan(problem: VectorProblem, x_bar, box: Optional[DomainBox] = None,
                     count: int = DEFAULT_GLOBAL_COUNT, seed: int = 0,
                     points_per_axis: int = DEFAULT_POINTS_PER_AXIS) -> ScanResult:
    """Same test over a lattice of the whole box followed by ``count`` seeded uniform points."""
    if count < 0:
        raise ScheduleError(f"sample count must be non-negative, got {count}")
    region = box or problem.domain_box or DomainBox.cube(problem.s)

    def batches() -> Iterator[np.ndarray]:
        yield from _chunks(_lattice(region, points_per_axis, max(count, 1)))
        rng = np.random.default_rng(seed)
        remaining = count
        while remaining > 0:
            size = min(CHUNK, remaining)
            yield region.sample(rng, size)
            remaining -= size

    return _scan(problem, x_bar, batches(), "global")


def enumerate_candidates(problem: VectorProblem, box: Optional[DomainBox] = None,
                         points_per_axis: int = DEFAULT_POINTS_PER_AXIS,
                         cap: int = DEFAULT_SAMPLE_CAP) -> List[List[float]]:
    """Feasible lattice nodes not dominated by any feasible node among their 3ˢ − 1 neighbours.

    Row-major lattice order, last coordinate fastest.
    """
    region = box or problem.domain_box or DomainBox.cube(problem.s)
    size = _odd_within(points_per_axis, problem.s, cap)
    if size < 3:
        raise ScheduleError(f"lattice of {points_per_axis} points per axis does not fit in {cap} samples")
    nodes = region.grid(size)
    shape = (size,) * problem.s
    mask, _ = feasible_mask(problem, nodes)
    values = problem.objective_map.values_batch(nodes)
    feasible = mask.reshape(shape)
    f_grid = values.reshape(shape + (problem.n,))
    dominated = np.zeros(shape, dtype=bool)
    tol = problem.tolerances
    for offset in product((-1, 0, 1), repeat=problem.s):
        if not any(offset):
            continue
        target = tuple(slice(max(0, -o), size - max(0, o)) for o in offset)
        source = tuple(slice(max(0, o), size - max(0, -o)) for o in offset)
        neighbour_feasible = feasible[source]
        margins = problem.cone_c.margins(f_grid[target] - f_grid[source])
        with np.errstate(invalid="ignore"):
            beaten = neighbour_feasible & np.all(margins > tol.strict, axis=-1)
        dominated[target] |= beaten
    selected = feasible & ~dominated & np.all(np.isfinite(f_grid), axis=-1)
    candidates = nodes[selected.reshape(-1)].tolist()
    logger.debug(f"{len(candidates)} lattice candidates among {mask.sum()} feasible nodes of {len(nodes)}")
    return candidates
