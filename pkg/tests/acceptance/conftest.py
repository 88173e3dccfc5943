"""Corpus table shared by the acceptance checks."""
from domain.adapters.problem_loader import load_problem
from tests.conftest import PROBLEMS_DIR

# file name -> known weak minimizers, as documented in each file's header
CORPUS_MINIMIZERS = {
    "corner.vopt": [(0.0, 0.0)],
    "cubic.vopt": [(0.0,)],
    "e1.vopt": [(0.0,)],
    "e2.vopt": [(0.5, 0.5)],
    "e3.vopt": [(0.0,)],
    "e6.vopt": [(0.0,)],
    "pareto_segment.vopt": [(0.0,), (0.5,), (1.0,)],
    "saddle.vopt": [(-1.0,), (1.0,)],
    "simplex_plane.vopt": [(0.5, 0.25, 0.25)],
    "skewed_disk.vopt": [(-0.6, -0.8), (-1.0, 0.0)],
    "skewed_k.vopt": [(0.0, 0.0), (0.0, 0.5)],
    "twin_wells.vopt": [(-1.0,), (1.0,)],
}

# file name -> planted points that are not weak minimizers
PLANTED_NON_MINIMIZERS = {
    "e1.vopt": (1.0,),
    "saddle.vopt": (0.0,),
}


def corpus_cases():
    return [(name, point) for name, points in sorted(CORPUS_MINIMIZERS.items()) for point in points]


def corpus_problem(name: str):
    return load_problem(PROBLEMS_DIR / name)
