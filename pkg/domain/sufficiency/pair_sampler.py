"""Reproducible samples of point pairs (x̄, x) for the convexity falsifiers.

A sample is a deterministic anchor lattice followed by seeded uniform draws.
The lattice depends only on the box, and uniform draws come from one stream,
so the pairs produced for a budget are a prefix of those produced for any
larger budget with the same box and seed.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from domain.core.errors import DimensionMismatchError, ScheduleError
from domain.model.vector_problem import DomainBox

logger = logging.getLogger(__name__)

DEFAULT_PAIR_COUNT = 10_000
LATTICE_PAIR_LIMIT = 5_000
LATTICE_SIZES = (9, 7, 5, 3)
CHUNK = 1_024


@dataclass(frozen=True)
class SamplingBudget:
    """How many pairs to examine, where, and with which seed.

    ``box`` overrides the problem's domain box; with neither, the cube
    ``[-1, 1]ˢ`` is used.
    """

    pair_count: int = DEFAULT_PAIR_COUNT
    box: Optional[DomainBox] = None
    seed: int = 0

    def __post_init__(self):
        if self.pair_count < 1:
            raise ScheduleError(f"pair count must be at least 1, got {self.pair_count}")
        if self.seed < 0:
            raise ScheduleError(f"seed must be non-negative, got {self.seed}")

    def resolve_box(self, dimension: int, fallback: Optional[DomainBox] = None) -> DomainBox:
        box = self.box or fallback or DomainBox.cube(dimension)
        if box.dimension != dimension:
            raise DimensionMismatchError(f"sampling box lives in R^{box.dimension}, functions in R^{dimension}")
        return box

    def to_dict(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "box": None if self.box is None else self.box.to_list(),
            "seed": self.seed,
        }


def lattice_size(dimension: int) -> int:
    """Largest odd points-per-axis whose ordered lattice pairs fit the lattice limit (1 if none)."""
    for size in LATTICE_SIZES:
        points = size ** dimension
        if points * (points - 1) <= LATTICE_PAIR_LIMIT:
            return size
    return 1


def anchor_lattice(box: DomainBox) -> np.ndarray:
    size = lattice_size(box.dimension)
    if size == 1:
        return box.center[None, :]
    return box.grid(size)


def _batches(count: int) -> Iterator[int]:
    while count > 0:
        yield min(CHUNK, count)
        count -= CHUNK


def sample_pairs(budget: SamplingBudget, box: DomainBox) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield up to ``budget.pair_count`` batches ``(anchors, points)`` with ``x ≠ x̄`` row-wise."""
    lattice = anchor_lattice(box)
    first, second = np.meshgrid(np.arange(len(lattice)), np.arange(len(lattice)), indexing="ij")
    distinct = first != second
    lattice_pairs = np.stack([first[distinct], second[distinct]], axis=1)[: budget.pair_count]
    for start in range(0, len(lattice_pairs), CHUNK):
        chunk = lattice_pairs[start:start + CHUNK]
        yield lattice[chunk[:, 0]], lattice[chunk[:, 1]]
    remaining = budget.pair_count - len(lattice_pairs)
    logger.debug(f"{len(lattice_pairs)} lattice pairs, {max(remaining, 0)} uniform pairs in {box.to_list()}")
    rng = np.random.default_rng(budget.seed)
    for size in _batches(remaining):
        draws = rng.uniform(size=(size, 2, box.dimension))
        points = box.lower + draws * (box.upper - box.lower)
        anchors, others = points[:, 0, :], points[:, 1, :]
        keep = np.any(anchors != others, axis=1)
        yield anchors[keep], others[keep]


def sample_points(budget: SamplingBudget, box: DomainBox, exclude: np.ndarray) -> Iterator[np.ndarray]:
    """Yield batches of up to ``budget.pair_count`` points of the box other than ``exclude``.

    Lattice first, then seeded uniform draws, with the same prefix property as
    :func:`sample_pairs`.
    """
    lattice = anchor_lattice(box)
    lattice = lattice[np.any(lattice != exclude, axis=1)][: budget.pair_count]
    if len(lattice):
        yield lattice
    rng = np.random.default_rng(budget.seed)
    for size in _batches(budget.pair_count - len(lattice)):
        points = box.lower + rng.uniform(size=(size, box.dimension)) * (box.upper - box.lower)
        yield points[np.any(points != exclude, axis=1)]
