"""Recursive-descent parser for ``.vopt`` problem descriptions.

The grammar is shipped in ``docs/problem_format.md``. Every failure raises a
:class:`ParseError` (or a subclass) carrying the line and column of the
offending token.
"""
import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from domain.cones.polyhedral_cone import PolyhedralCone
from domain.core.errors import (
    ConeLiteralError,
    DegenerateConeError,
    DimensionMismatchError,
    ParseError,
    ScheduleError,
    SectionDimensionError,
    UnknownIdentifierError,
)
from domain.core.tolerances import DEFAULT_TOLERANCES, OPTION_KEYS, Tolerances
from domain.model.expression import Norm, make_symbols
from domain.model.vector_problem import DomainBox, VectorProblem
from domain.parsing.tokenizer import Token, TokenKind, tokenize

logger = logging.getLogger(__name__)

UNARY_FUNCTIONS = {
    "exp": sympy.exp,
    "log": sympy.log,
    "sin": sympy.sin,
    "cos": sympy.cos,
    "abs": sympy.Abs,
}
VARIADIC_FUNCTIONS = {"norm": Norm}
RESERVED = set(UNARY_FUNCTIONS) | set(VARIADIC_FUNCTIONS)
REQUIRED_SECTIONS = ("vars", "objective", "constraint", "coneC", "coneK")
OPTIONAL_SECTIONS = ("box", "options")
MAX_EXPONENT = 64
NON_FINITE = (sympy.zoo, sympy.oo, -sympy.oo, sympy.nan)


@dataclass
class ProblemDocument:
    """Parsed sections of one problem file, before assembly into a problem."""

    text: str
    variables: Tuple[str, ...] = ()
    objectives: Tuple[sympy.Expr, ...] = ()
    constraints: Tuple[sympy.Expr, ...] = ()
    cone_c: Optional[PolyhedralCone] = None
    cone_k: Optional[PolyhedralCone] = None
    box: Optional[DomainBox] = None
    options: Dict[str, float] = field(default_factory=dict)

    @property
    def tolerances(self) -> Tolerances:
        return DEFAULT_TOLERANCES.merged_options(self.options)

    def to_problem(self) -> VectorProblem:
        return VectorProblem(
            self.variables, self.objectives, self.constraints,
            self.cone_c, self.cone_k, self.box, self.tolerances,
        )


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.symbols: Dict[str, sympy.Symbol] = {}
        self.section_tokens: Dict[str, Token] = {}

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        if token.kind != TokenKind.EOF:
            self.index += 1
        return token

    def fail(self, message: str, token: Optional[Token] = None, error=ParseError):
        token = token or self.current
        raise error(message, token.line, token.column)

    def at_symbol(self, text: str) -> bool:
        return self.current.kind == TokenKind.SYMBOL and self.current.text == text

    def expect_symbol(self, text: str, context: str) -> Token:
        if not self.at_symbol(text):
            self.fail(f"expected '{text}' {context}, found {self.current.describe()}")
        return self.advance()

    def expect_close(self, opening: Token, closing: str) -> Token:
        if self.current.kind == TokenKind.EOF:
            self.fail(f"unclosed '{opening.text}' opened at line {opening.line}, column {opening.column}")
        return self.expect_symbol(closing, f"to close '{opening.text}' from line {opening.line}, column {opening.column}")

    def expect_ident(self, context: str) -> Token:
        if self.current.kind != TokenKind.IDENT:
            self.fail(f"expected a name {context}, found {self.current.describe()}")
        return self.advance()

    # document

    def parse_document(self) -> ProblemDocument:
        document = ProblemDocument(text=self.text)
        handlers = {
            "vars": self.parse_vars,
            "objective": lambda doc: self.parse_components(doc, "objectives"),
            "constraint": lambda doc: self.parse_components(doc, "constraints"),
            "coneC": lambda doc: self.parse_cone_section(doc, "cone_c"),
            "coneK": lambda doc: self.parse_cone_section(doc, "cone_k"),
            "box": self.parse_box,
            "options": self.parse_options,
        }
        while True:
            while self.current.kind == TokenKind.SEPARATOR:
                self.advance()
            if self.current.kind == TokenKind.EOF:
                break
            keyword = self.current
            if keyword.kind != TokenKind.IDENT or keyword.text not in handlers:
                expected = ", ".join(REQUIRED_SECTIONS + OPTIONAL_SECTIONS)
                self.fail(f"expected a section keyword ({expected}), found {keyword.describe()}")
            if keyword.text in self.section_tokens:
                self.fail(f"duplicate section '{keyword.text}'")
            if keyword.text in ("objective", "constraint", "box") and "vars" not in self.section_tokens:
                self.fail(f"section '{keyword.text}' must follow 'vars'")
            self.section_tokens[keyword.text] = keyword
            self.advance()
            handlers[keyword.text](document)
            if self.current.kind not in (TokenKind.SEPARATOR, TokenKind.EOF):
                self.fail(f"expected end of section '{keyword.text}', found {self.current.describe()}")
        missing = [name for name in REQUIRED_SECTIONS if name not in self.section_tokens]
        if missing:
            self.fail(f"missing section(s): {', '.join(missing)}")
        self.check_dimensions(document)
        return document

    def check_dimensions(self, document: ProblemDocument):
        checks = (
            ("coneC", document.cone_c.ambient_dim, len(document.objectives), "objective components"),
            ("coneK", document.cone_k.ambient_dim, len(document.constraints), "constraint components"),
        )
        for section, cone_dimension, count, what in checks:
            if cone_dimension != count:
                self.fail(
                    f"{section} lives in R^{cone_dimension} but there are {count} {what}",
                    self.section_tokens[section], SectionDimensionError,
                )
        if document.box is not None and document.box.dimension != len(document.variables):
            self.fail(
                f"box has {document.box.dimension} intervals for {len(document.variables)} variables",
                self.section_tokens["box"], SectionDimensionError,
            )

    def parse_vars(self, document: ProblemDocument):
        names = []
        while True:
            token = self.expect_ident("in 'vars'")
            if token.text in RESERVED:
                self.fail(f"'{token.text}' is a function name and cannot be a variable", token)
            if token.text in names:
                self.fail(f"variable '{token.text}' declared twice", token)
            names.append(token.text)
            if not self.at_symbol(","):
                break
            self.advance()
        document.variables = tuple(names)
        self.symbols = dict(zip(names, make_symbols(names)))

    def parse_components(self, document: ProblemDocument, attribute: str):
        opening = self.expect_symbol("[", "before the component list")
        components = [self.parse_expression()]
        while self.at_symbol(","):
            self.advance()
            components.append(self.parse_expression())
        self.expect_close(opening, "]")
        setattr(document, attribute, tuple(components))

    # expressions

    def parse_expression(self) -> sympy.Expr:
        start = self.current
        expression = self.parse_sum()
        if expression.has(*NON_FINITE):
            self.fail("expression evaluates to a non-finite constant", start)
        return expression

    def parse_sum(self) -> sympy.Expr:
        result = self.parse_term()
        while self.at_symbol("+") or self.at_symbol("-"):
            operator = self.advance().text
            right = self.parse_term()
            result = result + right if operator == "+" else result - right
        return result

    def parse_term(self) -> sympy.Expr:
        result = self.parse_unary()
        while self.at_symbol("*") or self.at_symbol("/"):
            operator = self.advance()
            right = self.parse_unary()
            if operator.text == "/" and right.is_zero:
                self.fail("division by zero", operator)
            result = result * right if operator.text == "*" else result / right
        return result

    def parse_unary(self) -> sympy.Expr:
        if self.at_symbol("-"):
            self.advance()
            return -self.parse_unary()
        if self.at_symbol("+"):
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> sympy.Expr:
        base = self.parse_atom()
        if not self.at_symbol("^"):
            return base
        caret = self.advance()
        if self.at_symbol("("):
            opening = self.advance()
            exponent = self.parse_integer_exponent()
            self.expect_close(opening, ")")
        else:
            exponent = self.parse_integer_exponent()
        if exponent < 0 and base.is_zero:
            self.fail("zero raised to a negative power", caret)
        return base ** exponent

    def parse_integer_exponent(self) -> int:
        sign = 1
        if self.at_symbol("-") or self.at_symbol("+"):
            sign = -1 if self.advance().text == "-" else 1
        token = self.current
        if token.kind != TokenKind.NUMBER or not token.text.isdigit():
            self.fail(f"exponent must be an integer, found {token.describe()}")
        self.advance()
        value = sign * int(token.text)
        if abs(value) > MAX_EXPONENT:
            self.fail(f"exponent {value} exceeds the supported range ±{MAX_EXPONENT}", token)
        return value

    def parse_atom(self) -> sympy.Expr:
        token = self.current
        if token.kind == TokenKind.NUMBER:
            self.advance()
            return sympy.Rational(self.number_fraction(token))
        if token.kind == TokenKind.IDENT:
            self.advance()
            if token.text in self.symbols:
                return self.symbols[token.text]
            if token.text in RESERVED:
                return self.parse_call(token)
            self.fail(f"unknown identifier '{token.text}'", token, UnknownIdentifierError)
        if self.at_symbol("("):
            opening = self.advance()
            inner = self.parse_sum()
            self.expect_close(opening, ")")
            return inner
        self.fail(f"expected an expression, found {token.describe()}")

    def parse_call(self, name: Token) -> sympy.Expr:
        if not self.at_symbol("("):
            self.fail(f"function '{name.text}' must be called with parentheses", name)
        opening = self.advance()
        arguments = [self.parse_sum()]
        while self.at_symbol(","):
            self.advance()
            arguments.append(self.parse_sum())
        self.expect_close(opening, ")")
        if name.text in UNARY_FUNCTIONS:
            if len(arguments) != 1:
                self.fail(f"'{name.text}' takes exactly one argument, got {len(arguments)}", name)
            return UNARY_FUNCTIONS[name.text](arguments[0])
        return VARIADIC_FUNCTIONS[name.text](*arguments)

    def number_fraction(self, token: Token) -> Fraction:
        if not np.isfinite(float(token.text)):
            self.fail(f"number {token.text} is out of range", token)
        return Fraction(token.text)

    # literals

    def parse_signed_number(self) -> float:
        sign = 1.0
        if self.at_symbol("-") or self.at_symbol("+"):
            sign = -1.0 if self.advance().text == "-" else 1.0
        token = self.current
        if token.kind != TokenKind.NUMBER:
            self.fail(f"expected a number, found {token.describe()}")
        self.advance()
        value = float(token.text)
        if not np.isfinite(value):
            self.fail(f"number {token.text} is out of range", token)
        return sign * value

    def parse_number_row(self) -> Tuple[Token, List[float]]:
        opening = self.expect_symbol("[", "before a vector")
        values = [self.parse_signed_number()]
        while self.at_symbol(","):
            self.advance()
            values.append(self.parse_signed_number())
        self.expect_close(opening, "]")
        return opening, values

    def parse_matrix(self) -> List[List[float]]:
        opening = self.expect_symbol("[", "before a list of vectors")
        first, row = self.parse_number_row()
        rows = [row]
        while self.at_symbol(","):
            self.advance()
            start, row = self.parse_number_row()
            if len(row) != len(rows[0]):
                self.fail(f"vector has {len(row)} entries, expected {len(rows[0])}", start, SectionDimensionError)
            rows.append(row)
        self.expect_close(opening, "]")
        return rows

    def parse_cone(self) -> PolyhedralCone:
        kind = self.expect_ident("naming a cone (orthant, generators, halfspaces)")
        try:
            if kind.text == "orthant":
                opening = self.expect_symbol("(", "after 'orthant'")
                size = self.current
                if size.kind != TokenKind.NUMBER or not size.text.isdigit():
                    self.fail(f"orthant dimension must be a positive integer, found {size.describe()}")
                self.advance()
                self.expect_close(opening, ")")
                dimension = int(size.text)
                if not 1 <= dimension <= 64:
                    self.fail(f"orthant dimension {dimension} is outside 1..64", size, ConeLiteralError)
                return PolyhedralCone.orthant(dimension)
            if kind.text == "generators":
                return PolyhedralCone.from_generators(self.parse_matrix())
            if kind.text == "halfspaces":
                return PolyhedralCone.from_halfspaces(self.parse_matrix())
        except ParseError:
            raise
        except DegenerateConeError as error:
            self.fail(str(error), kind, ConeLiteralError)
        self.fail(f"unknown cone kind '{kind.text}' (expected orthant, generators or halfspaces)", kind)

    def parse_cone_section(self, document: ProblemDocument, attribute: str):
        setattr(document, attribute, self.parse_cone())

    def parse_box(self, document: ProblemDocument):
        opening = self.expect_symbol("[", "before the box intervals")
        intervals = []
        while True:
            start, interval = self.parse_number_row()
            if len(interval) != 2:
                self.fail(f"a box interval needs exactly two bounds, got {len(interval)}", start, SectionDimensionError)
            if not interval[0] < interval[1]:
                self.fail(f"empty box interval [{interval[0]}, {interval[1]}]", start)
            intervals.append(interval)
            if not self.at_symbol(","):
                break
            self.advance()
        self.expect_close(opening, "]")
        bounds = np.array(intervals)
        document.box = DomainBox(bounds[:, 0], bounds[:, 1])

    def parse_options(self, document: ProblemDocument):
        while True:
            key = self.expect_ident("as an option key")
            if key.text not in OPTION_KEYS:
                self.fail(f"unknown option '{key.text}' (known: {', '.join(OPTION_KEYS)})", key)
            self.expect_symbol("=", f"after option '{key.text}'")
            start = self.current
            value = self.parse_signed_number()
            try:
                DEFAULT_TOLERANCES.merged_options({key.text: value})
            except ScheduleError as error:
                self.fail(str(error), start)
            document.options[key.text] = value
            if not self.at_symbol(","):
                break
            self.advance()


def parse_document(text: str) -> ProblemDocument:
    """Parse ``text`` into its sections, cross-checking all dimensions."""
    if not text.strip():
        raise ParseError("empty problem description", 1, 1)
    return _Parser(text).parse_document()


def parse(text: str) -> VectorProblem:
    """Parse a complete problem description.

    Raises:
        ParseError: with line and column for syntax, dimension and cone errors
    """
    document = parse_document(text)
    try:
        problem = document.to_problem()
    except DimensionMismatchError as error:
        raise SectionDimensionError(str(error), 1, 1) from error
    logger.debug(f"parsed problem with s={problem.s}, n={problem.n}, m={problem.m}")
    return problem


def parse_expression(text: str, variables: Sequence[str]) -> sympy.Expr:
    """Parse a single expression over ``variables``."""
    parser = _Parser(text)
    parser.symbols = dict(zip(variables, make_symbols(variables)))
    while parser.current.kind == TokenKind.SEPARATOR:
        parser.advance()
    expression = parser.parse_expression()
    while parser.current.kind == TokenKind.SEPARATOR:
        parser.advance()
    if parser.current.kind != TokenKind.EOF:
        parser.fail(f"unexpected {parser.current.describe()} after the expression")
    return expression


def parse_cone(text: str) -> PolyhedralCone:
    """Parse a stand-alone cone literal such as ``generators [[1,0],[1,1]]``."""
    parser = _Parser(text)
    cone = parser.parse_cone()
    while parser.current.kind == TokenKind.SEPARATOR:
        parser.advance()
    if parser.current.kind != TokenKind.EOF:
        parser.fail(f"unexpected {parser.current.describe()} after the cone literal")
    return cone


def problem_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
