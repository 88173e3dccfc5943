"""Tests for CriticalCone and direction sampling."""
import numpy as np
import pytest

from domain.certificates.critical_cone import CriticalCone, critical_rows, sample_critical_directions
from domain.core.errors import ScheduleError


def _cone(rows, dimension=2):
    return CriticalCone(np.array(rows, dtype=float).reshape(-1, dimension), dimension, 1e-9)


class TestCriticalCone:
    """Tests for CriticalCone."""

    def test_half_plane(self):
        """{u₁ <= 0}: the u₂ axis plus the ray −e₁."""
        cone = _cone([[1.0, 0.0]])

        assert cone.lineality_basis.shape == (2, 1)
        assert len(cone.generators) == 3
        assert any(np.allclose(g, [-1.0, 0.0]) for g in cone.generators)
        assert any(np.allclose(g, [0.0, 1.0]) for g in cone.generators)
        assert any(np.allclose(g, [0.0, -1.0]) for g in cone.generators)

    def test_quadrant(self):
        cone = _cone([[1.0, 0.0], [0.0, 1.0]])

        assert cone.lineality_basis.shape == (2, 0)
        assert all(np.allclose(g, [-1.0, 0.0]) or np.allclose(g, [0.0, -1.0]) for g in cone.generators)
        assert len(cone.generators) == 2

    def test_zero_rows_impose_nothing(self):
        cone = _cone([[0.0, 0.0]])

        assert cone.contains([5.0, -7.0])
        assert len(cone.generators) == 4

    def test_membership(self):
        cone = _cone([[1.0, 0.0]])

        assert cone.contains([-1.0, 3.0])
        assert not cone.contains([1.0, 0.0])
        assert not cone.contains([1.0, 0.0, 0.0])

    def test_trivial(self):
        cone = _cone([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])

        assert cone.is_trivial
        assert cone.to_dict()["trivial"] is True

    def test_rows_stack_both_blocks(self):
        rows = critical_rows(np.eye(2), np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([[1.0]]), np.array([[5.0, 6.0]]))

        assert rows.tolist() == [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]


class TestSampleCriticalDirections:
    """Tests for sample_critical_directions()."""

    def test_generators_come_first(self):
        cone = _cone([[1.0, 0.0], [0.0, 1.0]])

        directions = sample_critical_directions(cone, 10)
        assert {tuple(np.round(u, 12)) for u in directions[:2]} == {(-1.0, 0.0), (0.0, -1.0)}

    def test_samples_are_unit_and_inside(self):
        cone = _cone([[1.0, 0.0], [0.0, 1.0]])

        for u in sample_critical_directions(cone, 20, seed=3):
            assert np.linalg.norm(u) == pytest.approx(1.0)
            assert cone.contains(u)

    def test_deterministic_for_a_seed(self):
        cone = _cone([[1.0, 0.0]])

        first = sample_critical_directions(cone, 8, seed=1)
        second = sample_critical_directions(cone, 8, seed=1)
        assert all(np.array_equal(a, b) for a, b in zip(first, second))

    def test_trivial_cone_yields_nothing(self):
        assert sample_critical_directions(_cone([[1.0], [-1.0]], 1), 16) == []

    def test_negative_count(self):
        with pytest.raises(ScheduleError):
            sample_critical_directions(_cone([[1.0, 0.0]]), -1)
