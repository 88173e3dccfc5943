"""JSON report handler."""
import json

from domain.core.report_handler import ReportHandler
from domain.model.certificate_report import CertificateReport


class JSONReportHandler(ReportHandler):
    """Handler rendering reports as sorted, indented JSON."""

    def render(self, report: CertificateReport) -> str:
        return json.dumps(report.to_dict(include_meta=self.include_meta), indent=2, sort_keys=True, allow_nan=False) + "\n"
