"""Canonical text form of a problem (the inverse of the parser)."""
from typing import Iterable, List

import numpy as np
import sympy
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from domain.cones.polyhedral_cone import PolyhedralCone
from domain.core.tolerances import OPTION_KEYS
from domain.model.vector_problem import VectorProblem
from domain.parsing.problem_parser import problem_digest


class ExpressionPrinter(StrPrinter):
    """Prints sympy trees in the ``.vopt`` expression syntax."""

    def _print_Pow(self, expr, rational=False):
        base, exponent = expr.as_base_exp()
        if not exponent.is_Integer:
            return super()._print_Pow(expr, rational)
        if exponent == -1:
            return f"1/{self.parenthesize(base, PRECEDENCE['Pow'], strict=False)}"
        exponent_text = str(exponent) if exponent > 0 else f"({exponent})"
        return f"{self.parenthesize(base, PRECEDENCE['Pow'], strict=False)}^{exponent_text}"

    def _print_Abs(self, expr):
        return f"abs({self._print(expr.args[0])})"

    def _print_Norm(self, expr):
        return f"norm({', '.join(self._print(arg) for arg in expr.args)})"

    def _print_Exp1(self, expr):
        return "exp(1)"


_PRINTER = ExpressionPrinter({"order": "lex"})


def format_expression(expression: sympy.Expr) -> str:
    return _PRINTER.doprint(expression)


def format_number(value: float) -> str:
    return format(float(value), ".17g")


def _format_rows(rows: Iterable[Iterable[float]]) -> str:
    return "[" + ", ".join("[" + ", ".join(format_number(v) for v in row) + "]" for row in rows) + "]"


def format_cone(cone: PolyhedralCone) -> str:
    """``orthant(d)`` for the nonnegative orthant, unit generators otherwise."""
    if cone.is_orthant():
        return f"orthant({cone.ambient_dim})"
    return f"generators {_format_rows(cone.generators)}"


def serialize(problem: VectorProblem) -> str:
    """Canonical text: fixed section order, 17 significant digits, every option written."""
    lines: List[str] = [
        f"vars {', '.join(problem.variables)}",
        f"objective [{', '.join(format_expression(e) for e in problem.objectives)}]",
        f"constraint [{', '.join(format_expression(e) for e in problem.constraints)}]",
        f"coneC {format_cone(problem.cone_c)}",
        f"coneK {format_cone(problem.cone_k)}",
    ]
    if problem.domain_box is not None:
        lines.append(f"box {_format_rows(np.stack([problem.domain_box.lower, problem.domain_box.upper], axis=1))}")
    options = problem.tolerances.to_options()
    lines.append("options " + ", ".join(f"{key}={format_number(options[key])}" for key in OPTION_KEYS))
    return "\n".join(lines) + "\n"


def digest(problem: VectorProblem) -> str:
    """SHA-256 of the canonical serialisation."""
    return problem_digest(serialize(problem))
