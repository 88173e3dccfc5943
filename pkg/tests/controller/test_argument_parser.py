"""Tests for the command-line grammar."""
import pytest

from controller.argument_parser import build_parser, parse_arguments, parse_box_bounds, parse_vector
from domain.core.errors import CommandLineError


class TestParseArguments:
    """Tests for parse_arguments()."""

    def test_defaults(self):
        args = parse_arguments(["check", "e1.vopt", "--point", "0"])

        assert args.command == "check"
        assert args.problem == "e1.vopt"
        assert args.seed == 0
        assert args.format == "json"
        assert args.no_meta is False
        assert args.tol_membership is None

    def test_single_negative_number(self):
        assert parse_arguments(["check", "e1.vopt", "--point", "-1"]).point == "-1"

    def test_negative_vector_needs_equals(self):
        assert parse_arguments(["scan", "e2.vopt", "--point=-1,0"]).point == "-1,0"
        with pytest.raises(CommandLineError):
            parse_arguments(["scan", "e2.vopt", "--point", "-1,0"])

    @pytest.mark.parametrize("argv", [
        [],
        ["explode", "e1.vopt"],
        ["check"],
        ["check", "e1.vopt", "--bogus"],
        ["check", "e1.vopt", "--seed", "one"],
        ["check", "e1.vopt", "--format", "xml"],
        ["isolated", "e1.vopt", "--order", "3"],
        ["deriv", "e1.vopt", "--point", "0"],
    ])
    def test_usage_errors(self, argv):
        with pytest.raises(CommandLineError):
            parse_arguments(argv)

    def test_tolerance_overrides(self):
        args = parse_arguments(["check", "e1.vopt", "--tol-strict", "1e-6", "--margin", "0.01"])

        assert args.tol_strict == 1e-6
        assert args.margin == 0.01

    def test_scan_flags(self):
        args = parse_arguments(["scan", "e1.vopt", "--global", "--count", "10", "--box", "-1:1"])

        assert args.global_scan is True
        assert args.count == 10

    def test_polar_problem_is_optional(self):
        assert parse_arguments(["polar", "--cone", "orthant(2)"]).problem is None

    def test_help_requests_exit(self, capsys):
        with pytest.raises(SystemExit) as exit_request:
            build_parser().parse_args(["check", "--help"])

        assert exit_request.value.code == 0
        assert "--point" in capsys.readouterr().out


class TestParseVector:
    """Tests for parse_vector()."""

    def test_values(self):
        assert parse_vector("0.5, -1,2e-3", "--point") == [0.5, -1.0, 0.002]

    def test_absent(self):
        assert parse_vector(None, "--point") is None

    @pytest.mark.parametrize("text", ["notanumber", "1,,2", "nan", "inf,0"])
    def test_invalid(self, text):
        with pytest.raises(CommandLineError, match="--point"):
            parse_vector(text, "--point")


class TestParseBoxBounds:
    """Tests for parse_box_bounds()."""

    def test_intervals(self):
        assert parse_box_bounds("0:1,-2:2") == [[0.0, 1.0], [-2.0, 2.0]]

    def test_absent(self):
        assert parse_box_bounds(None) is None

    @pytest.mark.parametrize("text", ["0-1", "0:1:2", "a:b"])
    def test_invalid(self, text):
        with pytest.raises(CommandLineError):
            parse_box_bounds(text)
