"""Tests for first- and second-order Fritz John certificates."""
import numpy as np
import pytest

from domain.certificates.fj_certificates import (
    BRANCH_ACTIVE_RAYS,
    BRANCH_MU_ZERO,
    BRANCH_SUPPLIED,
    critical_cone,
    first_order_certificate,
    pair_from_multipliers,
    quadratic_forms,
    second_order_certificate,
    validate_multipliers,
)
from domain.core.errors import (
    DimensionMismatchError,
    DirectionOutsideConeError,
    InfeasiblePointError,
    InvalidMultiplierError,
    NonsmoothPointError,
)
from tests.conftest import ProblemBuilder


class TestFirstOrderCertificate:
    """Tests for first_order_certificate()."""

    def test_active_constraint_balances_objective(self, e1):
        """f=x, g=−x at 0: λ = μ = 1/2."""
        pair = first_order_certificate(e1, [0.0])

        assert pair.lam == pytest.approx([0.5])
        assert pair.mu == pytest.approx([0.5])
        assert pair.branch == BRANCH_ACTIVE_RAYS
        assert pair.stationarity_residual <= 1e-9

    def test_inactive_constraint_refutes(self, e1):
        """At x=1 the constraint is slack and ∇f ≠ 0."""
        assert first_order_certificate(e1, [1.0]) is None

    def test_two_objectives(self, e2):
        """f=(x,y), g=1−x−y at (1/2,1/2): λ = (1/3, 1/3), μ = 1/3."""
        pair = first_order_certificate(e2, [0.5, 0.5])

        assert pair.lam == pytest.approx([1 / 3, 1 / 3])
        assert pair.mu == pytest.approx([1 / 3])
        assert pair.slackness_residual <= 1e-9

    def test_degenerate_constraint_takes_all_weight(self, e3):
        """g=x² has zero gradient at 0, so λ = 0 and μ = 1."""
        pair = first_order_certificate(e3, [0.0])

        assert pair.lam == pytest.approx([0.0])
        assert pair.mu == pytest.approx([1.0])

    def test_stationary_objective_uses_mu_zero_branch(self, e6):
        pair = first_order_certificate(e6, [0.0])

        assert pair.branch == BRANCH_MU_ZERO
        assert pair.lam == pytest.approx([1.0])
        assert pair.mu == pytest.approx([0.0])

    def test_skewed_cone(self):
        """C = cone{(1,0),(1,1)}, K = R²₊ at the origin: λ = μ inside C*."""
        problem = (ProblemBuilder("x, y").with_objective("x", "y").with_constraint("-x", "-y")
                   .with_cone_c("generators [[1,0],[1,1]]").with_cone_k("orthant(2)").build())

        pair = first_order_certificate(problem, [0.0, 0.0])

        assert pair is not None
        assert problem.polar_c.contains(pair.lam)
        assert np.abs(pair.lam - pair.mu).max() <= 1e-9
        assert pair.a.sum() + pair.b.sum() == pytest.approx(1.0)

    def test_infeasible_point(self, e1):
        with pytest.raises(InfeasiblePointError):
            first_order_certificate(e1, [-1.0])

    def test_nonsmooth_problem(self, abs_problem):
        with pytest.raises(NonsmoothPointError):
            first_order_certificate(abs_problem, [0.5])

    def test_to_dict(self, e1):
        data = first_order_certificate(e1, [0.0]).to_dict()

        assert data["lambda"] == pytest.approx([0.5])
        assert data["branch"] == "active rays"
        assert set(data) == {"lambda", "mu", "a", "b", "stationarity_residual", "slackness_residual", "branch"}


class TestSecondOrderCertificate:
    """Tests for second_order_certificate()."""

    def test_convex_objective_certified(self, e6):
        """f=x² on R: λ=1, μ=0 survives both critical directions."""
        pair = second_order_certificate(e6, [0.0], [[1.0], [-1.0]])

        assert pair.lam == pytest.approx([1.0])
        assert pair.mu == pytest.approx([0.0])

    def test_saddle_refuted(self, saddle):
        """f=−x² with a slack constraint has negative curvature on the critical cone."""
        assert second_order_certificate(saddle, [0.0], [[1.0], [-1.0]]) is None

    def test_saddle_boundary_certified(self, saddle):
        """At x=1 the active constraint restores curvature."""
        assert second_order_certificate(saddle, [1.0], []) is not None

    def test_no_directions_reduces_to_first_order(self, e1):
        second = second_order_certificate(e1, [0.0], [])
        first = first_order_certificate(e1, [0.0])

        assert second.lam == pytest.approx(first.lam)
        assert second.mu == pytest.approx(first.mu)

    def test_non_critical_direction_rejected(self, e1):
        with pytest.raises(DirectionOutsideConeError):
            second_order_certificate(e1, [0.0], [[1.0]])


class TestCriticalCone:
    """Tests for critical_cone()."""

    def test_whole_line_when_gradients_vanish(self, e6):
        cone = critical_cone(e6, [0.0])

        assert cone.contains([3.0]) and cone.contains([-3.0])
        assert cone.lineality_basis.shape == (1, 1)

    @pytest.mark.parametrize("fixture, x_bar", [("e1", [0.0]), ("e2", [0.5, 0.5])])
    def test_trivial_at_constrained_minimizers(self, request, fixture, x_bar):
        cone = critical_cone(request.getfixturevalue(fixture), x_bar)

        assert cone.is_trivial
        assert cone.to_dict()["generators"] == []

    def test_half_line(self, e3):
        """f=x, g=x² at 0: D = {u <= 0}."""
        cone = critical_cone(e3, [0.0])

        assert len(cone.generators) == 1
        assert cone.generators[0] == pytest.approx([-1.0])


class TestMultipliers:
    """Tests for validate_multipliers() and pair_from_multipliers()."""

    def test_valid_pair(self, e1):
        lam, mu = validate_multipliers(e1, [1.0], [0.0])

        assert lam.tolist() == [1.0]
        assert mu.tolist() == [0.0]

    @pytest.mark.parametrize("lam, mu", [([-1.0], [1.0]), ([1.0], [-0.5]), ([0.0], [0.0])])
    def test_invalid_pair(self, e1, lam, mu):
        with pytest.raises(InvalidMultiplierError):
            validate_multipliers(e1, lam, mu)

    def test_wrong_size(self, e1):
        with pytest.raises(DimensionMismatchError):
            validate_multipliers(e1, [1.0, 0.0], [0.0])

    def test_supplied_pair_residuals_are_measured(self, e1):
        pair = pair_from_multipliers(e1, [0.0], [1.0], [0.0])

        assert pair.branch == BRANCH_SUPPLIED
        assert pair.stationarity_residual == pytest.approx(1.0)
        assert pair.slackness_residual == 0.0


class TestQuadraticForms:
    def test_stack(self):
        hessians = np.array([np.eye(2), [[0.0, 1.0], [1.0, 0.0]]])

        assert quadratic_forms(hessians, np.array([1.0, 2.0])).tolist() == [5.0, 4.0]
