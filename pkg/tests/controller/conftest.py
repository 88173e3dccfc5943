"""Shared fixtures and mock classes for controller tests."""

from unittest.mock import MagicMock

import pytest

from controller.command_controller import CommandController
from domain.outputs.json_handler import JSONReportHandler
from domain.outputs.text_handler import TextReportHandler
from tests.conftest import PROBLEMS_DIR
from view.output_format import OutputFormat


# ============================================================================
# Mock UI Builder
# ============================================================================

class MockUIBuilder:
    """Builder for creating mock UI objects that record what they were asked to show."""

    def __init__(self):
        self.emit_error = None

    def with_failing_emit(self, error: Exception):
        self.emit_error = error
        return self

    def build(self):
        """Build the mock UI object."""
        builder = self

        class TestUI:
            def __init__(self):
                self.emit = MagicMock(side_effect=builder.emit_error)
                self.show_error = MagicMock()
                self.show_saved = MagicMock()

            @property
            def emitted(self) -> str:
                return "".join(call.args[0] for call in self.emit.call_args_list)

        return TestUI()


# ============================================================================
# Mock Path Builder
# ============================================================================

class MockPathBuilder:
    """Builder for creating mock Path objects for testing without filesystem access."""

    def __init__(self, name: str = "problem.vopt"):
        self._name = name
        self._exists = True
        self._is_dir = False
        self._content = ""
        self._read_error = None
        self._write_error = None

    def with_exists(self, exists: bool):
        self._exists = exists
        return self

    def with_is_dir(self, is_dir: bool):
        self._is_dir = is_dir
        return self

    def with_content(self, content: str):
        self._content = content
        return self

    def with_read_error(self, error: Exception):
        self._read_error = error
        return self

    def with_write_error(self, error: Exception):
        self._write_error = error
        return self

    def build(self):
        """Build the mock Path object; ``written`` collects write_text calls."""
        builder = self

        class MockStat:
            def __init__(self, size):
                self.st_size = size

        class MockPath:
            def __init__(self):
                self.written = []

            def exists(self):
                return builder._exists

            def is_dir(self):
                return builder._is_dir

            @property
            def name(self):
                return builder._name

            @property
            def suffix(self):
                return "." + builder._name.rsplit(".", 1)[1] if "." in builder._name else ""

            def read_text(self, encoding="utf-8"):
                if builder._read_error:
                    raise builder._read_error
                return builder._content

            def write_text(self, data, encoding="utf-8"):
                if builder._write_error:
                    raise builder._write_error
                self.written.append(data)
                return len(data)

            def stat(self):
                return MockStat(len("".join(self.written).encode("utf-8")))

            def __str__(self):
                return builder._name

        return MockPath()

    def build_factory(self):
        """Build a factory function that returns this mock path."""
        mock_path = self.build()
        return lambda path_str: mock_path


def corpus_factory(outputs: dict):
    """Path factory reading problems from the corpus and capturing outputs in ``outputs``."""

    def factory(path_str: str):
        if path_str.endswith(".vopt"):
            return PROBLEMS_DIR / path_str
        if path_str not in outputs:
            outputs[path_str] = MockPathBuilder(path_str).build()
        return outputs[path_str]

    return factory


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def handlers():
    return {OutputFormat.JSON: JSONReportHandler, OutputFormat.TEXT: TextReportHandler}


@pytest.fixture
def outputs():
    return {}


@pytest.fixture
def ui():
    return MockUIBuilder().build()


@pytest.fixture
def controller(ui, handlers, outputs):
    """Controller over the corpus with a fixed clock."""
    return CommandController(ui, handlers=handlers, path_factory=corpus_factory(outputs), clock=lambda: 0.0)
