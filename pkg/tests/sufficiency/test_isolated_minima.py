"""Tests for the weak isolated minimizer checks."""
import numpy as np
import pytest

from domain.core.errors import DirectionOutsideConeError, InfeasiblePointError, InvalidMultiplierError, ScheduleError
from domain.sufficiency.isolated_minima import (
    FIRST_ORDER_ISOLATED,
    NOT_CERTIFIED,
    SECOND_ORDER_ISOLATED,
    growth_constant,
    isolated_first_order_check,
    isolated_second_order_check,
    neighbourhood_sample,
    sphere_directions,
)
from domain.sufficiency.pair_sampler import SamplingBudget

BUDGET = SamplingBudget(pair_count=500, seed=0)


class TestSecondOrderIsolation:
    """Tests for isolated_second_order_check()."""

    def test_parabola(self, e6):
        """x² grows quadratically: value 2 on both directions and ε near the radius."""
        verdict = isolated_second_order_check(e6, [0.0], [1.0], [0.0], [[1.0], [-1.0]], BUDGET, radius=0.5)

        assert verdict.verdict == SECOND_ORDER_ISOLATED
        assert verdict.minimum == pytest.approx(2.0)
        assert verdict.epsilon >= 0.4
        assert verdict.neighbourhood_samples > 0

    def test_saddle_not_certified(self, saddle):
        verdict = isolated_second_order_check(saddle, [0.0], [1.0], [0.0], [[1.0]], BUDGET)

        assert verdict.verdict == NOT_CERTIFIED
        assert verdict.epsilon is None
        assert verdict.minimum == pytest.approx(-2.0)

    def test_directions_are_normalised(self, e6):
        verdict = isolated_second_order_check(e6, [0.0], [1.0], [0.0], [[3.0]], BUDGET)

        assert verdict.directions == [[1.0]]

    def test_non_critical_direction(self, e1):
        with pytest.raises(DirectionOutsideConeError):
            isolated_second_order_check(e1, [0.0], [0.5], [0.5], [[1.0]], BUDGET)

    def test_zero_direction(self, e6):
        with pytest.raises(DirectionOutsideConeError):
            isolated_second_order_check(e6, [0.0], [1.0], [0.0], [[0.0]], BUDGET)

    def test_stationarity_enforced(self, e1):
        with pytest.raises(InvalidMultiplierError):
            isolated_second_order_check(e1, [0.0], [1.0], [0.0], [], BUDGET)


class TestFirstOrderIsolation:
    """Tests for isolated_first_order_check()."""

    def test_absolute_value(self, abs_problem):
        """|x| grows linearly: slope 1 both ways and ε = 1."""
        verdict = isolated_first_order_check(abs_problem, [0.0], [1.0], [0.0], BUDGET)

        assert verdict.verdict == FIRST_ORDER_ISOLATED
        assert verdict.minimum >= 0.99
        assert verdict.epsilon == pytest.approx(1.0)

    def test_parabola_is_not_first_order_isolated(self, e6):
        verdict = isolated_first_order_check(e6, [0.0], [1.0], [0.0], BUDGET)

        assert verdict.verdict == NOT_CERTIFIED
        assert verdict.minimum == pytest.approx(0.0, abs=1e-3)

    def test_active_constraint_contributes(self, e1):
        """λ = μ = 1/2 at 0: d⁻(x/2 − x/2) is zero, so not isolated."""
        verdict = isolated_first_order_check(e1, [0.0], [0.5], [0.5], BUDGET)

        assert not verdict.certified

    @pytest.mark.parametrize("lam, mu, error", [
        ([0.0], [1.0], InvalidMultiplierError),
        ([-1.0], [0.0], InvalidMultiplierError),
    ])
    def test_invalid_multipliers(self, abs_problem, lam, mu, error):
        with pytest.raises(error):
            isolated_first_order_check(abs_problem, [0.0], lam, mu, BUDGET)

    def test_infeasible_point(self, abs_problem):
        with pytest.raises(InfeasiblePointError):
            isolated_first_order_check(abs_problem, [3.0], [1.0], [0.0], BUDGET)

    def test_radius_must_be_positive(self, abs_problem):
        with pytest.raises(ScheduleError):
            isolated_first_order_check(abs_problem, [0.0], [1.0], [0.0], BUDGET, radius=0.0)

    def test_to_dict(self, abs_problem):
        data = isolated_first_order_check(abs_problem, [0.0], [1.0], [0.0], BUDGET).to_dict()

        assert data["order"] == 1
        assert data["verdict"] == "first-order isolated (sampled)"
        assert data["margin"] == 1e-4


class TestGrowthConstant:
    """Tests for growth_constant()."""

    def test_limited_by_a_slow_sample(self):
        distances = np.array([0.1, 0.2])
        gains = np.array([0.1, 0.02])

        assert growth_constant(distances, gains, 1, 1.0) == pytest.approx(0.2)

    def test_uniform_growth_reaches_the_radius(self):
        distances = np.linspace(0.05, 0.5, 10)

        assert growth_constant(distances, distances ** 2, 2, 0.5) == pytest.approx(0.5)

    def test_no_samples(self):
        assert growth_constant(np.array([]), np.array([]), 1, 0.7) == 0.7

    def test_undefined_gains_are_ignored(self):
        distances = np.array([0.1, 0.2])
        gains = np.array([np.nan, 0.2])

        assert growth_constant(distances, gains, 1, 1.0) == pytest.approx(1.0)


class TestSampling:
    """Tests for sphere_directions() and neighbourhood_sample()."""

    def test_axes_come_first(self):
        directions = sphere_directions(2, 6)

        assert directions[:4].tolist() == [[1.0, 0.0], [0.0, 1.0], [-1.0, -0.0], [-0.0, -1.0]]
        assert np.allclose(np.linalg.norm(directions, axis=1), 1.0)

    def test_one_dimension_has_two_directions(self):
        assert sphere_directions(1, 16).tolist() == [[1.0], [-1.0]]

    def test_neighbourhood_is_feasible_and_inside_the_ball(self, e2):
        points = neighbourhood_sample(e2, np.array([0.5, 0.5]), 0.25, BUDGET)

        assert len(points) > 0
        assert np.all(np.linalg.norm(points - 0.5, axis=1) <= 0.25 + 1e-12)
        assert np.all(points.sum(axis=1) >= 1.0 - 1e-9)
