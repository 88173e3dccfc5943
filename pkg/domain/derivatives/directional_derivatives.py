"""Sampled lower Dini and lower Hadamard directional derivatives.

A liminf over ``t ↓ 0`` (and ``u′ → u`` for Hadamard) cannot be computed from
finitely many samples; these estimators return the exact minimum of the
difference quotients over a fixed, reproducible sample and record where that
minimum was attained.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from domain.core.errors import EvaluationError, ScheduleError

logger = logging.getLogger(__name__)

EPSILON = float(np.finfo(float).eps)
# largest roundoff admitted in a second-order quotient 2t⁻²[h(x+tu′) − h(x)]
SECOND_ORDER_ROUNDOFF = 1e-4

ScalarFunction = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class LimitSchedule:
    """Discretisation of ``t ↓ 0, u′ → u``.

    Steps are ``t_k = t0 * rho**k`` for ``k < depth``; only the ``tail``
    finest steps are sampled. Each sampled step pairs with ``u′ = u`` and
    ``perturbation_count`` points of the ball of radius ``radius(t)`` around u
    taken from an unscrambled Halton sequence starting at index ``seed``.
    """

    t0: float = 1e-2
    rho: float = 0.5
    depth: int = 20
    perturbation_count: int = 32
    radius: Callable[[float], float] = field(default=math.sqrt)
    tail: int = 4
    seed: int = 0

    def __post_init__(self):
        if not (self.t0 > 0 and math.isfinite(self.t0)):
            raise ScheduleError(f"t0 must be positive, got {self.t0}")
        if not 0 < self.rho < 1:
            raise ScheduleError(f"rho must lie in (0, 1), got {self.rho}")
        if self.depth < 2:
            raise ScheduleError(f"depth must be at least 2, got {self.depth}")
        if self.perturbation_count < 0:
            raise ScheduleError(f"perturbation count must be non-negative, got {self.perturbation_count}")
        if not 1 <= self.tail <= self.depth:
            raise ScheduleError(f"tail must lie in 1..{self.depth}, got {self.tail}")
        if self.seed < 0:
            raise ScheduleError(f"seed must be non-negative, got {self.seed}")

    def steps(self) -> np.ndarray:
        return self.t0 * self.rho ** np.arange(self.depth - self.tail, self.depth)

    def second_order_steps(self, magnitude: float) -> np.ndarray:
        """The ``tail`` finest steps of the whole grid with ``t² >= 4·eps·max(1, |h(x)|) / SECOND_ORDER_ROUNDOFF``.

        ``magnitude`` is ``|h(x)|``. The coarsest step is kept when no step qualifies.
        """
        grid = self.t0 * self.rho ** np.arange(self.depth)
        floor = math.sqrt(4.0 * EPSILON * max(1.0, abs(magnitude)) / SECOND_ORDER_ROUNDOFF)
        admissible = grid[grid >= floor]
        if admissible.size == 0:
            logger.warning(f"every step is below the roundoff floor {floor:.3e}; using t = {grid[0]:.3e}")
            admissible = grid[:1]
        return admissible[-self.tail:]

    def second_order_radius(self, t: float) -> float:
        """Perturbation radius of second-order quotients: ``radius(t)²``."""
        return self.radius(t) ** 2

    def ball_offsets(self, dimension: int) -> np.ndarray:
        """Points of the closed unit ball, first row always the origin."""
        offsets = np.zeros((1, dimension))
        if self.perturbation_count == 0:
            return offsets
        sampler = qmc.Halton(d=dimension, scramble=False)
        if self.seed:
            sampler.fast_forward(self.seed)
        cube = 2.0 * sampler.random(self.perturbation_count) - 1.0
        norms = np.linalg.norm(cube, axis=1)
        outside = norms > 1.0
        cube[outside] /= norms[outside, None]
        return np.vstack([offsets, cube])


@dataclass(frozen=True)
class DerivativeEstimate:
    value: float
    samples_used: int
    min_attained_at: Tuple[float, Tuple[float, ...]]

    def to_dict(self) -> dict:
        t, direction = self.min_attained_at
        return {
            "value": self.value,
            "samples_used": self.samples_used,
            "min_attained_at": {"t": t, "direction": list(direction)},
        }


def _evaluate(h: ScalarFunction, point: np.ndarray) -> float:
    try:
        value = float(h(point))
    except EvaluationError:
        raise
    except (ArithmeticError, ValueError, TypeError) as error:
        raise EvaluationError(f"cannot evaluate at {point.tolist()}: {error}") from error
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite value at {point.tolist()}")
    return value


def _minimum_quotient(h: ScalarFunction, x, u, schedule: LimitSchedule, perturb: bool,
                      quotient: Callable[[float, float, np.ndarray], float],
                      second_order: bool = False) -> DerivativeEstimate:
    x = np.asarray(x, dtype=float).reshape(-1)
    u = np.asarray(u, dtype=float).reshape(-1)
    if x.shape != u.shape:
        raise ScheduleError(f"point and direction sizes differ ({x.size} vs {u.size})")
    base_value = _evaluate(h, x)
    offsets = schedule.ball_offsets(x.size) if perturb else np.zeros((1, x.size))
    steps = schedule.second_order_steps(base_value) if second_order else schedule.steps()
    radius = schedule.second_order_radius if second_order else schedule.radius
    best = (math.inf, 0.0, u)
    samples = 0
    for t in steps:
        for offset in offsets:
            direction = u + radius(t) * offset if perturb else u
            value = quotient(t, _evaluate(h, x + t * direction) - base_value, direction)
            samples += 1
            if value < best[0]:
                best = (value, float(t), direction)
    value, t, direction = best
    return DerivativeEstimate(float(value), samples, (t, tuple(float(c) for c in direction)))


def dini_lower(h: ScalarFunction, x, u, schedule: LimitSchedule = LimitSchedule()) -> DerivativeEstimate:
    """``min_t t⁻¹[h(x+tu) − h(x)]`` over the sampled steps."""
    return _minimum_quotient(h, x, u, schedule, False, lambda t, difference, _: difference / t)


def hadamard_lower(h: ScalarFunction, x, u, schedule: LimitSchedule = LimitSchedule()) -> DerivativeEstimate:
    """``min_{t,u′} t⁻¹[h(x+tu′) − h(x)]``; never above :func:`dini_lower` on the same schedule."""
    return _minimum_quotient(h, x, u, schedule, True, lambda t, difference, _: difference / t)


def hadamard_second_lower(h: ScalarFunction, x, base: Optional[Sequence[float]], u,
                          schedule: LimitSchedule = LimitSchedule()) -> DerivativeEstimate:
    """``min_{t,u′} 2t⁻²[h(x+tu′) − h(x) − t·base(u′)]``.

    Steps come from :meth:`LimitSchedule.second_order_steps`, so the ``t⁻²``
    factor never amplifies roundoff in ``h`` beyond ``SECOND_ORDER_ROUNDOFF``;
    ``u′`` ranges over the ball of radius :meth:`LimitSchedule.second_order_radius`.

    Args:
        base: coefficient vector of the linear functional x*₁, ``None`` for zero
    """
    functional = np.zeros(np.size(x)) if base is None else np.asarray(base, dtype=float).reshape(-1)
    if functional.size != np.size(x):
        raise ScheduleError(f"base functional has {functional.size} coefficients for a point in R^{np.size(x)}")
    return _minimum_quotient(
        h, x, u, schedule, True,
        lambda t, difference, direction: 2.0 * (difference - t * float(functional @ direction)) / (t * t),
        second_order=True,
    )


def component_function(mapping, index: int) -> ScalarFunction:
    """The ``index``-th component of a differentiable map as a scalar function."""
    return lambda point: float(mapping.value(point)[index])
