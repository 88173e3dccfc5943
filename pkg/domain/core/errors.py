"""Exception hierarchy shared by every fjcone module.

Two families exist so the command line front end can map failures onto exit
codes without inspecting messages: ``UsageError`` (bad input, exit 1) and
``NumericalError`` (the computation itself broke down, exit 2).
"""


class FJConeError(Exception):
    """Base class for all fjcone errors."""


class UsageError(FJConeError):
    """The caller supplied something the engine cannot work with."""


class NumericalError(FJConeError):
    """A numerical procedure failed on otherwise valid input."""


class DimensionMismatchError(UsageError):
    """Vector or matrix sizes disagree with the problem or cone dimension."""


class DomainViolationError(UsageError):
    """A point lies outside the domain box standing in for the open set X."""


class InfeasiblePointError(UsageError):
    """A candidate point does not belong to the feasible set S."""


class InvalidMultiplierError(UsageError):
    """A supplied multiplier pair violates cone membership or normalization."""


class DirectionOutsideConeError(UsageError):
    """A direction passed to a second-order routine is not critical."""


class ScheduleError(UsageError):
    """A sampling schedule or budget has out-of-range parameters."""


class CommandLineError(UsageError):
    """Malformed command line (unknown flag, bad value)."""


class ProblemFileError(UsageError):
    """The problem file could not be found or read."""


class DegenerateConeError(NumericalError):
    """A cone is not pointed or not full-dimensional."""


class NonsmoothPointError(NumericalError):
    """Derivatives were requested where a nonsmooth node is active."""


class EvaluationError(NumericalError):
    """A function could not be evaluated at a sample point."""


class NumericalOverflowError(EvaluationError):
    """Evaluation produced a non-finite value."""


class LPIterationLimitError(NumericalError):
    """The simplex method exceeded its pivot budget."""


class LPFailureError(NumericalError):
    """An auxiliary LP ended in a state that should be impossible."""


class ParseError(UsageError):
    """Syntax or semantic error in a problem description.

    Attributes:
        line: 1-based line of the offending token
        column: 1-based column of the offending token
    """

    def __init__(self, message: str, line: int, column: int):
        self.reason = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")

    def to_dict(self) -> dict:
        return {"message": self.reason, "line": self.line, "column": self.column}


class UnknownIdentifierError(ParseError):
    """An identifier that is neither a declared variable nor a function."""


class SectionDimensionError(ParseError, DimensionMismatchError):
    """Section sizes disagree (cone dimension vs. component count)."""


class ConeLiteralError(ParseError, DegenerateConeError):
    """A cone literal describes a degenerate cone."""

