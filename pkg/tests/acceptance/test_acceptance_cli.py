"""Byte-identical reports from repeated command-line runs."""
import pytest

import main as fjcone_main
from tests.conftest import PROBLEMS_DIR

pytestmark = pytest.mark.acceptance


def problem_path(name: str) -> str:
    return str(PROBLEMS_DIR / name)


@pytest.mark.parametrize("argv", [
    ["check", problem_path("e2.vopt"), "--point", "0.5,0.5"],
    ["check2", problem_path("saddle.vopt"), "--point", "0", "--seed", "5"],
    ["sufficiency", problem_path("cubic.vopt"), "--point", "0", "--pairs", "500"],
    ["isolated", problem_path("e6.vopt"), "--point", "0", "--pairs", "200"],
    ["scan", problem_path("skewed_disk.vopt"), "--point=-0.6,-0.8", "--radius", "0.2"],
    ["deriv", problem_path("e1.vopt"), "--point", "0", "--direction", "1"],
    ["polar", problem_path("skewed_k.vopt")],
], ids=lambda argv: argv[0])
def test_reports_are_reproducible(argv, capsys):
    outputs = []
    for _ in range(2):
        code = fjcone_main.main(argv + ["--no-meta"])
        outputs.append((code, capsys.readouterr().out))

    assert outputs[0] == outputs[1]
    assert outputs[0][0] == 0
    assert outputs[0][1]
