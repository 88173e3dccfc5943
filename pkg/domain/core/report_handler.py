"""Abstract base class for report handlers."""
import abc
from pathlib import Path

from domain.model.certificate_report import CertificateReport


class ReportHandler(metaclass=abc.ABCMeta):
    """Abstract Base Class for different report formats."""

    def __init__(self, include_meta: bool = True):
        self.include_meta = include_meta

    @abc.abstractmethod
    def render(self, report: CertificateReport) -> str:
        raise NotImplementedError("Subclasses must implement render()")

    def save(self, report: CertificateReport, destination: Path) -> int:
        """Write the rendered report to ``destination`` and return its size in bytes."""
        destination.write_text(self.render(report), encoding="utf-8")
        return destination.stat().st_size
