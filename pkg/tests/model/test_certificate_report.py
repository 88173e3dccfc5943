"""Tests for CertificateReport."""
import pytest

from domain.core.errors import NumericalOverflowError
from domain.model.certificate_report import CertificateReport


class TestCertificateReport:
    """Tests for the report model."""

    def test_minimal_report(self):
        data = CertificateReport(command="polar").to_dict()

        assert data["command"] == "polar"
        assert data["flags"] == []
        assert data["candidate"] is None
        assert "first_order" not in data

    def test_meta_can_be_dropped(self):
        data = CertificateReport(command="check", wall_time=0.5).to_dict(include_meta=False)

        assert "wall_time" not in data and "tool_version" not in data

    @pytest.mark.parametrize("bad", [float("nan"), float("-inf")])
    def test_non_finite_fields_rejected(self, bad):
        report = CertificateReport(command="deriv", derivative={"estimates": [{"value": bad}]})

        with pytest.raises(NumericalOverflowError, match=r"report\.derivative\.estimates\[0\]\.value"):
            report.to_dict()

    def test_from_dict_round_trip(self):
        report = CertificateReport(command="check", candidate=[1.0], verdict="FJ-consistent", flags=["x"])

        assert CertificateReport.from_dict(report.to_dict()) == report
