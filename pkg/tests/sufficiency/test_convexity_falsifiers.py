"""Tests for the generalised convexity falsifiers."""
from dataclasses import replace

import numpy as np
import pytest

from domain.cones.polyhedral_cone import PolyhedralCone
from domain.core.errors import DimensionMismatchError
from domain.sufficiency.convexity_falsifiers import (
    PSEUDOCONVEX,
    SECOND_ORDER_PSEUDOCONVEX,
    falsify_pseudoconvex,
    falsify_second_order_pseudoconvex,
    falsify_second_order_strict_pseudoconvex,
    falsify_strict_pseudoconvex,
    recheck_witness,
)
from domain.sufficiency.pair_sampler import SamplingBudget
from tests.conftest import ProblemBuilder

BUDGET = SamplingBudget(pair_count=2000, seed=0)
HALF_LINE = PolyhedralCone.orthant(1)


def _scalar(expression: str, variables: str = "x"):
    return ProblemBuilder(variables).with_objective(expression).build().objective_map


class TestPseudoconvex:
    """Tests for falsify_pseudoconvex()."""

    def test_cube_has_a_witness_at_its_flat_point(self):
        """x³ at x̄ = 0: f(−1) < f(0) while f′(0)·d = 0."""
        witness = falsify_pseudoconvex(_scalar("x^3"), HALF_LINE, BUDGET)

        assert witness.definition == PSEUDOCONVEX
        assert witness.x_bar == (0.0,)
        assert witness.x == (-1.0,)
        assert witness.violated_clause == "i"
        assert witness.consequent_value == 0.0
        assert witness.antecedent_value == pytest.approx(1.0)

    def test_concave_parabola_has_a_witness(self):
        witness = falsify_pseudoconvex(_scalar("-x^2"), HALF_LINE, BUDGET)

        assert witness.x_bar == (-0.75,)
        assert witness.x == (1.0,)

    @pytest.mark.parametrize("expression", ["x^2", "3*x - 1", "exp(x)"])
    def test_convex_functions_survive(self, expression):
        assert falsify_pseudoconvex(_scalar(expression), HALF_LINE, BUDGET) is None

    def test_vector_objective_with_orthant(self):
        f = ProblemBuilder("x, y").with_objective("x^2 + y^2", "(x - 1)^2 + y^2").build().objective_map

        assert falsify_pseudoconvex(f, PolyhedralCone.orthant(2), BUDGET) is None

    def test_fixed_anchor(self):
        f = _scalar("x^3")

        assert falsify_pseudoconvex(f, HALF_LINE, BUDGET, anchor=[0.5]) is None
        assert falsify_pseudoconvex(f, HALF_LINE, BUDGET, anchor=[0.0]).x == (-1.0,)

    def test_admissible_filter(self):
        def nothing(anchors, points):
            return np.zeros(len(points), dtype=bool)

        assert falsify_pseudoconvex(_scalar("x^3"), HALF_LINE, BUDGET, admissible=nothing) is None

    def test_cone_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            falsify_pseudoconvex(_scalar("x"), PolyhedralCone.orthant(2), BUDGET)

    def test_anchor_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            falsify_pseudoconvex(_scalar("x"), HALF_LINE, BUDGET, anchor=[0.0, 1.0])


class TestStrictPseudoconvex:
    """Tests for falsify_strict_pseudoconvex()."""

    def test_constant_function_has_a_witness(self):
        witness = falsify_strict_pseudoconvex(_scalar("1"), BUDGET)

        assert witness.violated_clause == "i"
        assert witness.antecedent_value == 0.0
        assert witness.consequent_value == 0.0

    def test_parabola_survives(self):
        assert falsify_strict_pseudoconvex(_scalar("x^2"), BUDGET) is None

    def test_tiny_negative_slope_is_not_a_witness(self):
        """−10⁻¹²·x: ∇h(x̄)(x − x̄) = −10⁻¹²·|x − x̄| < 0 whenever h(x) <= h(x̄)."""
        assert falsify_strict_pseudoconvex(_scalar("-1e-12*x"), BUDGET) is None

    def test_vector_map_rejected(self):
        f = ProblemBuilder("x, y").with_objective("x", "y").build().objective_map

        with pytest.raises(DimensionMismatchError):
            falsify_strict_pseudoconvex(f, BUDGET)


class TestSecondOrder:
    """Tests for the second-order falsifiers."""

    def test_cube_fails_the_curvature_clause(self):
        witness = falsify_second_order_pseudoconvex(_scalar("x^3"), HALF_LINE, BUDGET)

        assert witness.definition == SECOND_ORDER_PSEUDOCONVEX
        assert witness.x_bar == (0.0,)
        assert witness.violated_clause == "ii"

    def test_concave_parabola_fails_the_slope_clause(self):
        witness = falsify_second_order_pseudoconvex(_scalar("-x^2"), HALF_LINE, BUDGET)

        assert witness.violated_clause == "i"
        assert witness.consequent_value < 0

    def test_parabola_survives(self):
        assert falsify_second_order_pseudoconvex(_scalar("x^2"), HALF_LINE, BUDGET) is None

    def test_strict_parabola_survives(self):
        assert falsify_second_order_strict_pseudoconvex(_scalar("x^2"), BUDGET) is None

    def test_strict_constant_fails_the_curvature_clause(self):
        witness = falsify_second_order_strict_pseudoconvex(_scalar("2"), BUDGET)

        assert witness.violated_clause == "ii"
        assert witness.consequent_value == 0.0

    def test_strict_tiny_negative_slope_survives(self):
        assert falsify_second_order_strict_pseudoconvex(_scalar("-1e-12*x"), BUDGET) is None

    def test_strict_tiny_negative_curvature_survives_at_a_flat_anchor(self):
        """−10⁻¹²·x² at x̄ = 0: zero slope, curvature −2·10⁻¹² < 0."""
        h = _scalar("-1e-12*x^2")

        assert falsify_second_order_strict_pseudoconvex(h, BUDGET, anchor=[0.0]) is None

    def test_strict_concave_fails_the_slope_clause(self):
        witness = falsify_second_order_strict_pseudoconvex(_scalar("-x^2"), BUDGET)

        assert witness.violated_clause == "i"
        assert witness.x_bar == (-1.0,)
        assert witness.x == (1.0,)


class TestRecheckWitness:
    """Tests for recheck_witness()."""

    def test_witness_reverifies(self):
        f = _scalar("x^3")
        witness = falsify_pseudoconvex(f, HALF_LINE, BUDGET)

        assert recheck_witness(witness, f, HALF_LINE)

    def test_coincident_points_rejected(self):
        f = _scalar("x^3")
        witness = replace(falsify_pseudoconvex(f, HALF_LINE, BUDGET), x=(0.0,))

        assert not recheck_witness(witness, f, HALF_LINE)

    def test_unknown_definition_rejected(self):
        f = _scalar("x^3")
        witness = replace(falsify_pseudoconvex(f, HALF_LINE, BUDGET), definition="quasiconvex")

        assert not recheck_witness(witness, f, HALF_LINE)

    def test_pair_that_satisfies_the_definition(self):
        f = _scalar("x^3")
        witness = replace(falsify_pseudoconvex(f, HALF_LINE, BUDGET), x_bar=(0.5,), x=(0.0,))

        assert not recheck_witness(witness, f, HALF_LINE)

    def test_to_dict(self):
        data = falsify_pseudoconvex(_scalar("x^3"), HALF_LINE, BUDGET).to_dict()

        assert data["x_bar"] == [0.0]
        assert data["definition"] == "pseudoconvex"
