"""Load problem files through a Path-like object."""
import logging

from controller.path_protocol import PathLike
from domain.core.errors import ProblemFileError
from domain.model.vector_problem import VectorProblem
from domain.parsing.problem_parser import parse

logger = logging.getLogger(__name__)

PROBLEM_SUFFIX = ".vopt"


def load_problem(path: PathLike) -> VectorProblem:
    """Read and parse a problem file.

    Expects a Path-like object providing ``exists``, ``is_dir`` and
    ``read_text`` (a ``pathlib.Path`` or a test mock implementing
    :class:`controller.path_protocol.PathLike`).

    Raises:
        ProblemFileError: the file is missing, a directory or unreadable
        ParseError: the contents are not a valid problem description
    """
    if not path.exists():
        raise ProblemFileError(f"problem file '{path.name}' not found")
    if path.is_dir():
        raise ProblemFileError(f"'{path.name}' is a directory, not a problem file")
    if path.suffix != PROBLEM_SUFFIX:
        logger.warning(f"problem file '{path.name}' does not use the {PROBLEM_SUFFIX} suffix")
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as error:
        raise ProblemFileError(f"cannot read '{path.name}': {error}") from error
    return parse(text)
