"""Tests for the exception hierarchy."""
import pytest

from domain.core import errors


class TestErrorFamilies:
    """Every error belongs to exactly one exit-code family, except the parse errors that refine a second one."""

    @pytest.mark.parametrize("error", [
        errors.DimensionMismatchError, errors.DomainViolationError, errors.InfeasiblePointError,
        errors.InvalidMultiplierError, errors.DirectionOutsideConeError, errors.ScheduleError,
        errors.CommandLineError, errors.ProblemFileError,
    ])
    def test_usage_errors(self, error):
        assert issubclass(error, errors.UsageError)
        assert not issubclass(error, errors.NumericalError)

    @pytest.mark.parametrize("error", [
        errors.DegenerateConeError, errors.NonsmoothPointError, errors.EvaluationError,
        errors.NumericalOverflowError, errors.LPIterationLimitError, errors.LPFailureError,
    ])
    def test_numerical_errors(self, error):
        assert issubclass(error, errors.NumericalError)
        assert not issubclass(error, errors.UsageError)

    def test_parse_error_position(self):
        error = errors.ParseError("bad token", 3, 7)

        assert str(error) == "line 3, column 7: bad token"
        assert error.to_dict() == {"message": "bad token", "line": 3, "column": 7}

    def test_cone_literal_error_is_both(self):
        assert issubclass(errors.ConeLiteralError, errors.ParseError)
        assert issubclass(errors.ConeLiteralError, errors.DegenerateConeError)
