"""Unit tests for probe result models"""

import json

import pytest

from clreg.diagnostics import DiagnosticReport, ProbeRow, StatResult
from clreg.errors import PreconditionError


@pytest.fixture
def report():
    rows = [
        ProbeRow("1", {"n": 1.0, "cosine_mean": 0.4}),
        ProbeRow("10", {"n": 10.0, "cosine_mean": 0.8, "extra": 2.0}),
    ]
    return DiagnosticReport("fisher", rows, StatResult(-0.9, 0.01, 2, "pearson"))


class TestModels:
    """Test StatResult, ProbeRow and DiagnosticReport"""

    def test_p_value_range(self):
        """Test p must lie in [0, 1]"""
        with pytest.raises(PreconditionError):
            StatResult(1.0, 1.5, 3, "pearson")

    def test_row_values_finite(self):
        """Test NaN values are rejected"""
        with pytest.raises(PreconditionError):
            ProbeRow("x", {"a": float("nan")})

    def test_flat(self):
        """Test key plus values"""
        assert ProbeRow("k", {"a": 1}).flat() == {"key": "k", "a": 1.0}

    def test_columns_in_first_seen_order(self, report):
        """Test the union of value names"""
        assert report.column_names() == ["key", "n", "cosine_mean", "extra"]

    def test_row_lookup(self, report):
        """Test lookup by key"""
        assert report.row("10").values["cosine_mean"] == 0.8
        with pytest.raises(KeyError):
            report.row("100")

    def test_write(self, report, tmp_path):
        """Test CSV and JSON outputs"""
        csv_path, json_path = report.write(tmp_path)
        assert csv_path.name == "probe_fisher.csv"
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "key,n,cosine_mean,extra"
        assert len(lines) == 3
        summary = json.loads(json_path.read_text())
        assert summary["stat"]["statistic"] == -0.9
        assert summary["n_rows"] == 2

    def test_overwrite_reported(self, report, tmp_path):
        """Test rewriting lists the replaced files"""
        report.write(tmp_path)
        overwritten = []
        report.write(tmp_path, overwritten)
        assert sorted(p.name for p in overwritten) == ["probe_fisher.csv", "probe_fisher.json"]
