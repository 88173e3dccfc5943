"""Pointed, full-dimensional polyhedral cones in double representation.

A cone is stored both as the conic hull of its extreme rays (``generators``)
and as an intersection of halfspaces ``{x | h·x >= 0}`` (``halfspace_normals``).
Both lists hold unit vectors and are kept minimal: the normals are exactly the
extreme rays of the polar cone.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np

from domain.core.errors import DegenerateConeError, DimensionMismatchError
from domain.core.tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10
DEDUPLICATION_TOLERANCE = 1e-8


def _as_matrix(vectors, name: str) -> np.ndarray:
    matrix = np.array(vectors, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1) if matrix.size else matrix.reshape(0, 0)
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise DegenerateConeError(f"{name} must be a nonempty list of nonempty vectors")
    if not np.all(np.isfinite(matrix)):
        raise DegenerateConeError(f"{name} contain non-finite entries")
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms <= RANK_TOLERANCE):
        raise DegenerateConeError(f"{name} contain a zero vector")
    return matrix / norms[:, None]


def _rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return int(np.linalg.matrix_rank(matrix, tol=RANK_TOLERANCE * max(1.0, np.abs(matrix).max())))


def _deduplicate(rays: Iterable[np.ndarray], dimension: int) -> np.ndarray:
    unique: List[np.ndarray] = []
    for ray in rays:
        if not any(np.allclose(ray, seen, atol=DEDUPLICATION_TOLERANCE) for seen in unique):
            unique.append(ray)
    # canonical order keeps serialisation and ray indices deterministic
    unique.sort(key=lambda r: tuple(-np.round(r, 12)))
    return np.array(unique, dtype=float).reshape(len(unique), dimension)


def _null_direction(rows: np.ndarray, dimension: int):
    """Unit vector spanning the null space of ``rows`` when it is one-dimensional."""
    if rows.shape[0] == 0:
        return np.ones(1) if dimension == 1 else None
    _, singular, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(singular > RANK_TOLERANCE * max(1.0, singular[0])))
    if rank != dimension - 1:
        return None
    return vt[-1]


def enumerate_extreme_rays(normals: np.ndarray, tol: float = DEFAULT_TOLERANCES.membership) -> np.ndarray:
    """Brute-force extreme rays of ``{x | H x >= 0}``.

    Every (d-1)-subset of normals whose null space is a line contributes the
    feasible orientations of that line. No pointedness check is done here.

    Args:
        normals: p×d matrix of unit halfspace normals
        tol: feasibility slack for ``h·x >= 0``

    Returns:
        k×d matrix of unit rays in canonical order (k may be 0)
    """
    dimension = normals.shape[1]
    candidates = []
    for subset in itertools.combinations(range(normals.shape[0]), dimension - 1):
        direction = _null_direction(normals[list(subset)], dimension)
        if direction is None:
            continue
        for orientation in (direction, -direction):
            if np.all(normals @ orientation >= -tol):
                candidates.append(orientation / np.linalg.norm(orientation))
    return _deduplicate(candidates, dimension)


def extreme_rays(halfspace_normals, tol: float = DEFAULT_TOLERANCES.membership) -> np.ndarray:
    """Minimal generating set of a pointed, full-dimensional halfspace cone.

    Raises:
        DegenerateConeError: when the intersection is not pointed or has empty interior
    """
    normals = _as_matrix(halfspace_normals, "halfspace normals")
    dimension = normals.shape[1]
    if _rank(normals) < dimension:
        raise DegenerateConeError(
            f"halfspace intersection in R^{dimension} is not pointed (normals have rank {_rank(normals)})"
        )
    rays = enumerate_extreme_rays(normals, tol)
    if _rank(rays) < dimension:
        raise DegenerateConeError(f"halfspace intersection in R^{dimension} has empty interior")
    logger.debug(f"{normals.shape[0]} normals in R^{dimension} -> {rays.shape[0]} extreme rays")
    return rays


def _read_only(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=float)
    matrix.flags.writeable = False
    return matrix


@dataclass(frozen=True, eq=False)
class PolyhedralCone:
    """Closed convex pointed cone with nonempty interior.

    Use :meth:`orthant`, :meth:`from_generators` or :meth:`from_halfspaces`
    rather than the raw constructor.
    """

    ambient_dim: int
    generators: np.ndarray
    halfspace_normals: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "generators", _read_only(self.generators))
        object.__setattr__(self, "halfspace_normals", _read_only(self.halfspace_normals))
        for name, matrix in (("generators", self.generators), ("halfspace normals", self.halfspace_normals)):
            if matrix.ndim != 2 or matrix.shape[1] != self.ambient_dim:
                raise DimensionMismatchError(f"{name} do not live in R^{self.ambient_dim}")

    @classmethod
    def orthant(cls, dimension: int) -> "PolyhedralCone":
        if dimension < 1:
            raise DegenerateConeError(f"orthant dimension must be positive, got {dimension}")
        identity = np.eye(dimension)
        return cls(dimension, identity, identity)

    @classmethod
    def from_generators(cls, generators) -> "PolyhedralCone":
        rays = _as_matrix(generators, "generators")
        try:
            normals = extreme_rays(rays)
        except DegenerateConeError as error:
            raise DegenerateConeError(f"generated cone is degenerate: {error}") from error
        return cls(rays.shape[1], extreme_rays(normals), normals)

    @classmethod
    def from_halfspaces(cls, normals) -> "PolyhedralCone":
        rays = extreme_rays(normals)
        return cls(rays.shape[1], rays, extreme_rays(rays))

    def _check(self, x) -> np.ndarray:
        vector = np.asarray(x, dtype=float)
        if vector.shape[-1:] != (self.ambient_dim,):
            raise DimensionMismatchError(
                f"vector of shape {vector.shape} tested against a cone in R^{self.ambient_dim}"
            )
        return vector

    def margins(self, x) -> np.ndarray:
        """Values ``h·x`` for every halfspace normal (batched over leading axes)."""
        return self._check(x) @ self.halfspace_normals.T

    def contains(self, x, tol: float = DEFAULT_TOLERANCES.membership) -> bool:
        return bool(np.all(self.margins(x) >= -tol))

    def interior_contains(self, x, tol: float = DEFAULT_TOLERANCES.strict) -> bool:
        return bool(np.all(self.margins(x) > tol))

    def contains_many(self, points, tol: float = DEFAULT_TOLERANCES.membership) -> np.ndarray:
        return np.all(self.margins(points) >= -tol, axis=-1)

    def interior_contains_many(self, points, tol: float = DEFAULT_TOLERANCES.strict) -> np.ndarray:
        return np.all(self.margins(points) > tol, axis=-1)

    def polar(self) -> "PolarCone":
        """``C* = {λ | λ·x >= 0 for all x in C}``."""
        return PolarCone(self.ambient_dim, extreme_rays(self.generators), self.generators)

    def is_orthant(self) -> bool:
        return self.equivalent(PolyhedralCone.orthant(self.ambient_dim), DEDUPLICATION_TOLERANCE)

    def equivalent(self, other: "PolyhedralCone", tol: float = DEFAULT_TOLERANCES.membership) -> bool:
        """Same extreme rays up to positive scaling and permutation."""
        if self.ambient_dim != other.ambient_dim or len(self.generators) != len(other.generators):
            return False
        return all(
            any(np.allclose(ray, candidate, atol=tol) for candidate in other.generators)
            for ray in self.generators
        )

    def to_dict(self) -> dict:
        return {
            "dimension": self.ambient_dim,
            "generators": self.generators.tolist(),
            "halfspace_normals": self.halfspace_normals.tolist(),
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}(R^{self.ambient_dim}, {len(self.generators)} rays)"


class PolarCone(PolyhedralCone):
    """Dual cone produced by :meth:`PolyhedralCone.polar`.

    Its generators are the extreme rays ``r`` used for finite interior tests
    (``x ∈ int C  ⇔  r·x > 0`` for every ray ``r`` of ``C*``) and as the
    coordinate system of Fritz John multipliers.
    """


def polar(cone: PolyhedralCone) -> PolarCone:
    return cone.polar()

