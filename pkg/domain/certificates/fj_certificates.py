"""Fritz John multiplier certificates found by linear programming.

Multipliers are parametrised over the unit extreme rays of the polar cones,
``λ = Σ aᵢ rᵢ`` and ``μ = Σ bⱼ qⱼ`` with ``a, b >= 0`` and ``Σa + Σb = 1``.
Complementary slackness is structural: a ray with ``qⱼ·g(x̄) < -tol`` gets
``bⱼ = 0``. The branch ``μ = 0`` is always tried first.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from domain.certificates.critical_cone import CriticalCone, critical_rows
from domain.core.errors import (
    DimensionMismatchError,
    DirectionOutsideConeError,
    InfeasiblePointError,
    InvalidMultiplierError,
    NonsmoothPointError,
)
from domain.lp.simplex import maximize
from domain.model.vector_problem import EvaluatedPoint, VectorProblem, evaluate, is_feasible

logger = logging.getLogger(__name__)

BRANCH_MU_ZERO = "mu=0"
BRANCH_ACTIVE_RAYS = "active rays"
BRANCH_SUPPLIED = "supplied"


@dataclass(frozen=True)
class MultiplierPair:
    """A normalised Fritz John pair (λ, μ) with its ray coefficients and residuals."""

    lam: np.ndarray
    mu: np.ndarray
    a: np.ndarray
    b: np.ndarray
    stationarity_residual: float
    slackness_residual: float
    branch: str = BRANCH_ACTIVE_RAYS

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam.tolist(),
            "mu": self.mu.tolist(),
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "stationarity_residual": self.stationarity_residual,
            "slackness_residual": self.slackness_residual,
            "branch": self.branch,
        }


def _require_candidate(problem: VectorProblem, x_bar) -> np.ndarray:
    if not problem.is_smooth:
        nodes = ", ".join(str(node) for node in problem.nonsmooth_nodes)
        raise NonsmoothPointError(f"Fritz John certificates need differentiable f and g; problem uses {nodes}")
    point = problem.point(x_bar)
    if not is_feasible(problem, point):
        raise InfeasiblePointError(f"x̄={point.tolist()} is not feasible")
    return point


def active_ray_mask(problem: VectorProblem, g_value: np.ndarray) -> np.ndarray:
    """Rays qⱼ of K* with ``qⱼ·g(x̄) >= -ray_activity``."""
    return problem.polar_k.generators @ g_value >= -problem.tolerances.ray_activity


def build_pair(problem: VectorProblem, point: EvaluatedPoint, a: np.ndarray, b: np.ndarray,
               branch: str = BRANCH_ACTIVE_RAYS) -> MultiplierPair:
    lam = problem.polar_c.generators.T @ a
    mu = problem.polar_k.generators.T @ b
    stationarity = float(np.max(np.abs(lam @ point.jac_f + mu @ point.jac_g)))
    slackness = float(abs(mu @ point.g_val))
    tol = problem.tolerances
    if stationarity > tol.stationarity or slackness > tol.slackness:
        logger.warning(f"certificate residuals above tolerance: stationarity {stationarity:.3e}, slackness {slackness:.3e}")
    return MultiplierPair(lam, mu, a, b, stationarity, slackness, branch)


def validate_multipliers(problem: VectorProblem, lam, mu):
    """``(λ, μ)`` as arrays after checking sizes, cone membership and ``(λ, μ) ≠ 0``.

    Raises:
        DimensionMismatchError: λ or μ has the wrong size
        InvalidMultiplierError: λ ∉ C*, μ ∉ K* or both vanish
    """
    lam = np.asarray(lam, dtype=float).reshape(-1)
    mu = np.asarray(mu, dtype=float).reshape(-1)
    if lam.size != problem.n or mu.size != problem.m:
        raise DimensionMismatchError(f"expected λ in R^{problem.n} and μ in R^{problem.m}, got sizes {lam.size} and {mu.size}")
    tol = problem.tolerances
    if not problem.polar_c.contains(lam, tol.membership):
        raise InvalidMultiplierError(f"λ={lam.tolist()} is not in C*")
    if not problem.polar_k.contains(mu, tol.membership):
        raise InvalidMultiplierError(f"μ={mu.tolist()} is not in K*")
    if not (np.any(lam) or np.any(mu)):
        raise InvalidMultiplierError("(λ, μ) must not be zero")
    return lam, mu


def pair_from_multipliers(problem: VectorProblem, x_bar, lam, mu) -> MultiplierPair:
    """Wrap user-supplied multipliers; residuals are measured, not enforced."""
    lam, mu = validate_multipliers(problem, lam, mu)
    point = evaluate(problem, problem.point(x_bar), order=1)
    stationarity = float(np.max(np.abs(lam @ point.jac_f + mu @ point.jac_g)))
    slackness = float(abs(mu @ point.g_val))
    return MultiplierPair(lam, mu, np.zeros(0), np.zeros(0), stationarity, slackness, BRANCH_SUPPLIED)


def _search(problem: VectorProblem, point: EvaluatedPoint, hessian_rows_a: Optional[np.ndarray] = None,
            hessian_rows_b: Optional[np.ndarray] = None) -> Optional[MultiplierPair]:
    """Shared LP: stationarity, normalisation, optional second-order rows, μ = 0 branch first."""
    rays_c = problem.polar_c.generators
    rays_k = problem.polar_k.generators
    active = active_ray_mask(problem, point.g_val)
    columns_a = (rays_c @ point.jac_f).T
    columns_b = (rays_k[active] @ point.jac_g).T
    for branch, use_b in ((BRANCH_MU_ZERO, False), (BRANCH_ACTIVE_RAYS, True)):
        if branch == BRANCH_ACTIVE_RAYS and not np.any(active):
            break
        width_b = columns_b.shape[1] if use_b else 0
        equalities = np.hstack([columns_a, columns_b[:, :width_b]])
        equalities = np.vstack([equalities, np.ones((1, equalities.shape[1]))])
        rhs = np.append(np.zeros(problem.s), 1.0)
        inequalities = None
        if hessian_rows_a is not None and hessian_rows_a.shape[0]:
            b_rows = hessian_rows_b[:, active][:, :width_b]
            inequalities = -np.hstack([hessian_rows_a, b_rows])
        outcome = maximize(
            np.zeros(equalities.shape[1]),
            a_ub=inequalities,
            b_ub=None if inequalities is None else np.zeros(inequalities.shape[0]),
            a_eq=equalities,
            b_eq=rhs,
        )
        logger.debug(f"certificate branch '{branch}': {outcome.status.value}")
        if outcome.optimal:
            z = np.maximum(outcome.z, 0.0)
            z = z / z.sum()
            a = z[:rays_c.shape[0]]
            b = np.zeros(rays_k.shape[0])
            b[np.flatnonzero(active)[:width_b]] = z[rays_c.shape[0]:]
            return build_pair(problem, point, a, b, branch)
    return None


def first_order_certificate(problem: VectorProblem, x_bar) -> Optional[MultiplierPair]:
    """Nonzero (λ, μ) ∈ C*×K* with ``λ∇f(x̄) + μ∇g(x̄) = 0`` and ``μ·g(x̄) = 0``, or None.

    Raises:
        InfeasiblePointError: x̄ is not feasible
        NonsmoothPointError: the problem uses abs/norm
    """
    point = evaluate(problem, _require_candidate(problem, x_bar), order=1)
    return _search(problem, point)


def critical_cone(problem: VectorProblem, x_bar) -> CriticalCone:
    """``{u | ∇f(x̄)u ∈ -C, ∇g(x̄)u ∈ -K}`` in halfspace form."""
    point = evaluate(problem, problem.point(x_bar), order=1)
    rows = critical_rows(problem.polar_c.generators, point.jac_f, problem.polar_k.generators, point.jac_g)
    return CriticalCone(rows, problem.s, problem.tolerances.membership)


def quadratic_forms(hessians: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``uᵀ Hₖ u`` for every Hessian in the stack."""
    return np.einsum("i,kij,j->k", u, hessians, u)


def second_order_certificate(problem: VectorProblem, x_bar, directions: Sequence[Sequence[float]]) -> Optional[MultiplierPair]:
    """First-order certificate that also makes ``[λ·∇²f + μ·∇²g](u,u) >= 0`` for every direction.

    Raises:
        DirectionOutsideConeError: a direction is not critical at x̄
    """
    anchor = _require_candidate(problem, x_bar)
    cone = critical_cone(problem, anchor)
    point = evaluate(problem, anchor, order=2)
    rows_a: List[np.ndarray] = []
    rows_b: List[np.ndarray] = []
    for direction in directions:
        u = np.asarray(direction, dtype=float).reshape(-1)
        if not cone.contains(u):
            raise DirectionOutsideConeError(f"direction {u.tolist()} is not critical at x̄={anchor.tolist()}")
        rows_a.append(problem.polar_c.generators @ quadratic_forms(point.hess_f, u))
        rows_b.append(problem.polar_k.generators @ quadratic_forms(point.hess_g, u))
    hessian_rows_a = np.array(rows_a).reshape(len(rows_a), problem.polar_c.generators.shape[0])
    hessian_rows_b = np.array(rows_b).reshape(len(rows_b), problem.polar_k.generators.shape[0])
    return _search(problem, point, hessian_rows_a, hessian_rows_b)


def totally_degenerate(point: EvaluatedPoint) -> bool:
    """∇f(x̄) = 0 and ∇g(x̄) = 0: every normalised pair is a certificate."""
    return not np.any(point.jac_f) and not np.any(point.jac_g)
