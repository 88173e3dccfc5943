"""Symbolic expressions over the decision variables.

Expressions are plain sympy trees. The only additions are the ``Norm``
primitive (Euclidean norm of its arguments) and helpers that locate the
nonsmooth nodes ``abs``/``norm`` and compile trees to numpy callables.
"""
import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np
import sympy

logger = logging.getLogger(__name__)


class Norm(sympy.Function):
    """Euclidean norm ``sqrt(e1^2 + ... + ek^2)``; nonsmooth where all args vanish."""

    is_real = True
    is_nonnegative = True

    def fdiff(self, argindex=1):
        return self.args[argindex - 1] / self


def _numpy_norm(*args):
    return np.sqrt(sum(np.square(arg) for arg in args))


LAMBDIFY_MODULES = [{"Norm": _numpy_norm}, "numpy"]
NONSMOOTH_FUNCTIONS: Tuple[type, ...] = (sympy.Abs, Norm)


def make_symbols(names: Sequence[str]) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(name, real=True) for name in names)


def differentiate(expression: sympy.Expr, symbol: sympy.Symbol) -> sympy.Expr:
    """Derivative with the measure-zero distribution terms of ``abs`` dropped."""
    derivative = sympy.diff(expression, symbol)
    if derivative.has(sympy.DiracDelta):
        derivative = derivative.replace(lambda node: isinstance(node, sympy.DiracDelta), lambda node: sympy.S.Zero)
    return derivative


def nonsmooth_nodes(expressions: Sequence[sympy.Expr]) -> List[sympy.Expr]:
    """All ``abs``/``norm`` subtrees, in a deterministic order."""
    found = set()
    for expression in expressions:
        found.update(expression.atoms(*NONSMOOTH_FUNCTIONS))
    return sorted(found, key=sympy.default_sort_key)


def compile_vector(expressions: Sequence[sympy.Expr], symbols: Sequence[sympy.Symbol]) -> Callable[..., list]:
    return sympy.lambdify(symbols, list(expressions), modules=LAMBDIFY_MODULES)


def compile_matrix(rows: Sequence[Sequence[sympy.Expr]], symbols: Sequence[sympy.Symbol]) -> Callable[..., list]:
    return sympy.lambdify(symbols, [list(row) for row in rows], modules=LAMBDIFY_MODULES)


def kink_detector(nodes: Sequence[sympy.Expr], symbols: Sequence[sympy.Symbol]) -> Callable[[np.ndarray], List[str]]:
    """Build ``x -> [text of every nonsmooth node whose arguments all vanish at x]``."""
    compiled = [(str(node), compile_vector(node.args, symbols)) for node in nodes]

    def active_at(x: np.ndarray) -> List[str]:
        return [
            text for text, arguments in compiled
            if np.all(np.asarray(arguments(*x), dtype=float) == 0.0)
        ]

    return active_at
