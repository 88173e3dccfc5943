"""Tests for OutputFormat."""
import pytest

from view.output_format import OutputFormat


class TestOutputFormat:
    """Tests for the report format enum."""

    @pytest.mark.parametrize("fmt, extension", [(OutputFormat.JSON, ".json"), (OutputFormat.TEXT, ".txt")])
    def test_extension(self, fmt, extension):
        assert fmt.extension == extension

    def test_choices(self):
        assert OutputFormat.choices() == ["json", "text"]

    def test_lookup_by_value(self):
        assert OutputFormat("text") is OutputFormat.TEXT

    @pytest.mark.parametrize("fmt, name, expected", [
        (OutputFormat.JSON, "report", "report.json"),
        (OutputFormat.TEXT, "out/report", "out/report.txt"),
        (OutputFormat.TEXT, "report.log", "report.log"),
        (OutputFormat.JSON, "report.json", "report.json"),
    ])
    def test_destination_defaults_the_suffix(self, fmt, name, expected):
        assert fmt.destination(name) == expected
