"""Unit tests for report writing"""

import json
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from clreg.diagnostics import probe_importance_accumulation
from clreg.metrics import read_accuracy_csv
from clreg.runner import emit_reports, metrics_document, run_sequence, write_table


@pytest.fixture
def si_run(tiny_config):
    return run_sequence(replace(tiny_config, strategy="si", lam=0.5))


class TestEmitReports:
    """Test the run output directory"""

    def test_files(self, si_run, tmp_path):
        """Test R, metrics, one Omega file per task and probe files"""
        probe = probe_importance_accumulation(si_run)
        result = emit_reports(si_run, tmp_path / "out", probes=[probe])
        names = sorted(p.name for p in result.paths)
        assert names == sorted([
            "R.csv", "metrics.json",
            "omega_task0.csv", "omega_task1.csv", "omega_task2.csv",
            "probe_omega.csv", "probe_omega.json",
        ])
        assert result.overwritten == []

    def test_matrix_survives(self, si_run, tmp_path):
        """Test R.csv reads back to the recorded matrix"""
        emit_reports(si_run, tmp_path)
        back = read_accuracy_csv(tmp_path / "R.csv")
        assert np.array_equal(back.R, si_run.matrix.R)
        assert np.array_equal(back.b, si_run.matrix.b)

    def test_metrics_json(self, si_run, tmp_path):
        """Test headline metrics and per-task lists"""
        emit_reports(si_run, tmp_path)
        document = json.loads((tmp_path / "metrics.json").read_text())
        assert document["strategy"] == "si"
        assert document["lam"] == 0.5
        assert len(document["train_f1"]) == 3
        assert set(document) >= {"mean_acc", "final_acc", "bwt", "fwt", "unseen_f1"}
        assert list(document) == sorted(document)

    def test_omega_layout(self, si_run, tmp_path):
        """Test one row per parameter with its group name"""
        emit_reports(si_run, tmp_path)
        frame = pd.read_csv(tmp_path / "omega_task1.csv", float_precision="round_trip")
        assert list(frame.columns) == ["index", "group", "value"]
        assert len(frame) == len(si_run.theta_init)
        assert frame["group"].iloc[0] == "layer1.weight"
        np.testing.assert_array_equal(frame["value"].to_numpy(), si_run.omega_snapshots[1])

    def test_overwrite_listed(self, si_run, tmp_path):
        """Test re-emitting reports every replaced file"""
        first = emit_reports(si_run, tmp_path)
        second = emit_reports(si_run, tmp_path)
        assert sorted(second.overwritten) == sorted(first.paths)

    def test_byte_stable(self, si_run, tmp_path):
        """Test identical runs write identical bytes"""
        emit_reports(si_run, tmp_path / "a")
        emit_reports(si_run, tmp_path / "b")
        for name in ("R.csv", "omega_task2.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_undefined_metric_is_null(self, tiny_config, tmp_path):
        """Test NaN metrics serialise as null"""
        single = replace(tiny_config, stream=replace(tiny_config.stream, n_subjects=1, holdout_frac=0.0))
        artifacts = run_sequence(single)
        assert np.isnan(metrics_document(artifacts)["bwt"])
        emit_reports(artifacts, tmp_path)
        document = json.loads((tmp_path / "metrics.json").read_text())
        assert document["bwt"] is None
        assert document["fwt"] is None


class TestWriteTable:
    """Test the generic row writer"""

    def test_columns_first_seen(self, tmp_path):
        """Test header order and missing cells"""
        path = write_table([{"a": 1, "b": 2.5}, {"a": 2, "c": "x"}], tmp_path / "t.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "a,b,c"
        assert lines[1] == "1,2.5,"
