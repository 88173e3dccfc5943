"""Human-readable report handler built on rich tables."""
import io
import json
from typing import Any, Iterator, Tuple

from rich.box import HEAVY_HEAD
from rich.console import Console
from rich.table import Table

from domain.certificates.candidate_check import Verdict
from domain.core.report_handler import ReportHandler
from domain.model.certificate_report import SECTION_FIELDS, CertificateReport

REPORT_WIDTH = 110


def _flatten(value: Any, prefix: str = "") -> Iterator[Tuple[str, str]]:
    """Nested dictionaries become dotted keys; lists are printed compactly."""
    if isinstance(value, dict):
        for key, item in value.items():
            yield from _flatten(item, f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, float):
        yield prefix, f"{value:.10g}"
    elif isinstance(value, (list, tuple)):
        yield prefix, json.dumps(value, separators=(", ", ": "))
    else:
        yield prefix, "-" if value is None else str(value)


class TextReportHandler(ReportHandler):
    """Handler rendering reports as plain-text tables."""

    def _table(self, title: str, rows) -> Table:
        table = Table(title=title, title_justify="left", box=HEAVY_HEAD, show_header=True, expand=False)
        table.add_column("field", no_wrap=True)
        table.add_column("value", overflow="fold")
        for key, value in rows:
            table.add_row(key, value)
        return table

    def render(self, report: CertificateReport) -> str:
        data = report.to_dict(include_meta=self.include_meta)
        console = Console(file=io.StringIO(), width=REPORT_WIDTH, record=True, color_system=None, force_terminal=False)
        summary = [(key, value) for key, value in _flatten({
            "command": data["command"],
            "candidate": data["candidate"],
            "feasible": data["feasible"],
            "verdict": data["verdict"],
            "problem digest": data["problem_digest"],
            "seed": data["seed"],
        })]
        if data["verdict"] in {verdict.value for verdict in Verdict}:
            summary.append(("conclusion", Verdict(data["verdict"]).conclusion))
        summary += [("flag", flag) for flag in data["flags"]]
        if self.include_meta:
            summary += [("tool version", data["tool_version"]), ("wall time", f"{data['wall_time'] or 0.0:.3f} s")]
        console.print(self._table("report", summary))
        for name in SECTION_FIELDS:
            if name in data:
                console.print(self._table(name.replace("_", " "), list(_flatten(data[name]))))
        console.print(self._table("tolerances", list(_flatten(data["tolerances"]))))
        return console.export_text()
