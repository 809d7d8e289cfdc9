"""Persisting run artifacts, sweep tables and probe outputs"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Union

from ..diagnostics.models import DiagnosticReport
from ..metrics.continual import write_accuracy_csv
from ..utils.serialization import write_json, write_rows_csv, write_vector_csv
from .experiments import ShuffleResult, SweepResult, run_metrics
from .training import RunArtifacts

logger = logging.getLogger(__name__)


@dataclass
class EmitResult:
    """Files written and the subset that replaced existing files"""
    paths: List[Path] = field(default_factory=list)
    overwritten: List[Path] = field(default_factory=list)


def _group_names(artifacts: RunArtifacts) -> List[str]:
    names = [""] * len(artifacts.theta_init)
    for name, start, length in artifacts.group_layout:
        names[start:start + length] = [name] * length
    return names


def metrics_document(artifacts: RunArtifacts) -> dict:
    """Content of metrics.json"""
    return {
        "strategy": artifacts.strategy,
        "lam": artifacts.lam,
        "seed": artifacts.seed,
        "task_ids": artifacts.task_ids,
        **run_metrics(artifacts),
        "unseen_f1_by_subject": artifacts.unseen_f1_by_subject,
        "train_f1": artifacts.train_f1,
        "train_acc": artifacts.train_acc,
        "final_loss": artifacts.final_loss,
        "compromise_norms": artifacts.compromise_norms,
        "wall_clock_s": artifacts.wall_clock,
    }


def emit_reports(
    artifacts: RunArtifacts,
    out_dir: Union[str, Path],
    probes: Sequence[DiagnosticReport] = (),
) -> EmitResult:
    """
    Write R.csv, metrics.json, omega_task{tau}.csv and probe_*.csv/json

    Args:
        artifacts: completed run
        out_dir: created when missing; existing files are overwritten
            with a warning and listed in the result
        probes: diagnostic reports to write alongside
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = EmitResult()

    matrix_path = out_dir / "R.csv"
    if matrix_path.exists():
        logger.warning(f"Overwriting existing file {matrix_path}")
        result.overwritten.append(matrix_path)
    result.paths.append(write_accuracy_csv(artifacts.matrix, matrix_path))

    result.paths.append(write_json(metrics_document(artifacts), out_dir / "metrics.json", result.overwritten))

    names = _group_names(artifacts)
    for tau, omega in enumerate(artifacts.omega_snapshots):
        result.paths.append(write_vector_csv(omega, out_dir / f"omega_task{tau}.csv", names, result.overwritten))

    for probe in probes:
        result.paths.extend(probe.write(out_dir, result.overwritten))

    logger.info(f"Wrote {len(result.paths)} report files to {out_dir}")
    return result


def write_sweep(result: SweepResult, out_dir: Union[str, Path]) -> EmitResult:
    out_dir = Path(out_dir)
    emitted = EmitResult()
    emitted.paths.append(write_rows_csv(result.rows, out_dir / "sweep.csv", overwritten=emitted.overwritten))
    emitted.paths.append(write_rows_csv(result.runs, out_dir / "sweep_runs.csv", overwritten=emitted.overwritten))
    if result.tests:
        emitted.paths.append(write_rows_csv(result.tests, out_dir / "sweep_tests.csv", overwritten=emitted.overwritten))
    return emitted


def write_shuffle(result: ShuffleResult, out_dir: Union[str, Path]) -> EmitResult:
    out_dir = Path(out_dir)
    emitted = EmitResult()
    emitted.paths.append(write_rows_csv(result.rows, out_dir / "shuffle.csv", overwritten=emitted.overwritten))
    emitted.paths.append(write_rows_csv(result.summary, out_dir / "shuffle_summary.csv", overwritten=emitted.overwritten))
    return emitted


def write_table(rows: Sequence[dict], path: Union[str, Path]) -> Path:
    """Generic table writer for experiment summaries"""
    return write_rows_csv(list(rows), path)
