"""Critical cones and their finite direction samples."""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List

import numpy as np

from domain.cones.polyhedral_cone import enumerate_extreme_rays
from domain.core.errors import ScheduleError

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10
DUPLICATE_TOLERANCE = 1e-9


def _unique_unit_vectors(vectors) -> List[np.ndarray]:
    unique: List[np.ndarray] = []
    for vector in vectors:
        norm = np.linalg.norm(vector)
        if norm <= RANK_TOLERANCE:
            continue
        unit = vector / norm
        if not any(np.allclose(unit, seen, atol=DUPLICATE_TOLERANCE) for seen in unique):
            unique.append(unit)
    return unique


@dataclass(frozen=True, eq=False)
class CriticalCone:
    """``D = {u | rᵢ∇f(x̄)u <= 0, qⱼ∇g(x̄)u <= 0}`` over all extreme rays of C* and K*.

    ``rows`` holds the left-hand sides; a row that is identically zero
    imposes nothing.
    """

    rows: np.ndarray
    dimension: int
    tolerance: float

    def contains(self, u) -> bool:
        direction = np.asarray(u, dtype=float).reshape(-1)
        if direction.size != self.dimension:
            return False
        return bool(np.all(self.rows @ direction <= self.tolerance)) if self.rows.size else True

    @cached_property
    def _decomposition(self):
        if self.rows.size == 0:
            return np.eye(self.dimension), np.zeros((self.dimension, 0))
        _, singular, vt = np.linalg.svd(self.rows, full_matrices=True)
        rank = int(np.sum(singular > RANK_TOLERANCE * max(1.0, singular[0] if singular.size else 0.0)))
        return vt[rank:].T, vt[:rank].T

    @property
    def lineality_basis(self) -> np.ndarray:
        """Orthonormal basis (columns) of the largest subspace inside D."""
        return self._decomposition[0]

    @cached_property
    def generators(self) -> List[np.ndarray]:
        """Unit generators: ± the lineality basis plus extreme rays of the pointed part."""
        lineality, row_space = self._decomposition
        vectors = [sign * column for column in lineality.T for sign in (1.0, -1.0)]
        if row_space.shape[1]:
            projected = -self.rows @ row_space
            norms = np.linalg.norm(projected, axis=1)
            keep = norms > RANK_TOLERANCE
            normals = projected[keep] / norms[keep, None]
            if normals.shape[0]:
                rays = enumerate_extreme_rays(normals, self.tolerance)
                vectors.extend(row_space @ ray for ray in rays)
        return _unique_unit_vectors(vectors)

    @property
    def is_trivial(self) -> bool:
        """True when D = {0}."""
        return not self.generators

    def to_dict(self) -> dict:
        return {
            "rows": self.rows.tolist(),
            "lineality_dimension": int(self.lineality_basis.shape[1]),
            "generators": [g.tolist() for g in self.generators],
            "trivial": self.is_trivial,
        }


def critical_rows(polar_c_rays: np.ndarray, jac_f: np.ndarray, polar_k_rays: np.ndarray, jac_g: np.ndarray) -> np.ndarray:
    return np.vstack([polar_c_rays @ jac_f, polar_k_rays @ jac_g])


def sample_critical_directions(cone: CriticalCone, count: int, seed: int = 0) -> List[np.ndarray]:
    """Generators of D followed by ``count`` random conic combinations, as unit vectors.

    Empty when D = {0}. Order is deterministic for a fixed seed.
    """
    if count < 0:
        raise ScheduleError(f"direction count must be non-negative, got {count}")
    generators = cone.generators
    if not generators:
        return []
    rng = np.random.default_rng(seed)
    basis = np.array(generators)
    weights = rng.exponential(size=(count, len(generators)))
    combinations = list(weights @ basis) if count else []
    directions = _unique_unit_vectors(list(generators) + combinations)
    inside = [u for u in directions if cone.contains(u)]
    logger.debug(f"{len(inside)} critical directions from {len(generators)} generators and {count} samples")
    return inside
