"""Problem builders shared by the whole suite."""
from pathlib import Path

import pytest

from domain.parsing.problem_parser import parse

PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"

E1 = "vars x; objective [x]; constraint [-x]; coneC orthant(1); coneK orthant(1)"
E2 = "vars x,y; objective [x,y]; constraint [1-x-y]; coneC orthant(2); coneK orthant(1)"
E3 = "vars x; objective [x]; constraint [x^2]; coneC orthant(1); coneK orthant(1)"
E6 = "vars x; objective [x^2]; constraint [-1]; coneC orthant(1); coneK orthant(1)"
SADDLE = "vars x; objective [-x^2]; constraint [x^2 - 1]; coneC orthant(1); coneK orthant(1)"
CUBIC = "vars x; objective [x^3]; constraint [-x]; coneC orthant(1); coneK orthant(1)"
ABS = "vars x; objective [abs(x)]; constraint [x^2 - 4]; coneC orthant(1); coneK orthant(1)"


class ProblemBuilder:
    """Builder for small problems written in the ``.vopt`` syntax."""

    def __init__(self, variables: str = "x"):
        self.variables = variables
        self.objective = "x"
        self.constraint = "-1"
        self.cone_c = "orthant(1)"
        self.cone_k = "orthant(1)"
        self.box = None
        self.options = None

    def with_objective(self, *components: str):
        self.objective = ", ".join(components)
        return self

    def with_constraint(self, *components: str):
        self.constraint = ", ".join(components)
        return self

    def with_cone_c(self, literal: str):
        self.cone_c = literal
        return self

    def with_cone_k(self, literal: str):
        self.cone_k = literal
        return self

    def with_box(self, literal: str):
        self.box = literal
        return self

    def with_options(self, literal: str):
        self.options = literal
        return self

    def text(self) -> str:
        lines = [
            f"vars {self.variables}",
            f"objective [{self.objective}]",
            f"constraint [{self.constraint}]",
            f"coneC {self.cone_c}",
            f"coneK {self.cone_k}",
        ]
        if self.box:
            lines.append(f"box {self.box}")
        if self.options:
            lines.append(f"options {self.options}")
        return "\n".join(lines)

    def build(self):
        return parse(self.text())


@pytest.fixture
def e1():
    return parse(E1)


@pytest.fixture
def e2():
    return parse(E2)


@pytest.fixture
def e3():
    return parse(E3)


@pytest.fixture
def e6():
    return parse(E6)


@pytest.fixture
def saddle():
    return parse(SADDLE)


@pytest.fixture
def cubic():
    return parse(CUBIC)


@pytest.fixture
def abs_problem():
    return parse(ABS)
