"""Configuration, training loop, experiments and report writing"""

from .config import (
    ConfigIssue,
    ConfigReport,
    ModelConfig,
    OptimizerConfig,
    RunConfig,
    config_from_dict,
    load_config,
)
from .experiments import (
    PROBE_KINDS,
    ShuffleResult,
    SweepResult,
    run_metrics,
    run_probe,
    shuffle_grid,
    stability_plasticity,
    sweep_lambda,
    train_probe_model,
)
from .reports import EmitResult, emit_reports, metrics_document, write_shuffle, write_sweep, write_table
from .training import RunArtifacts, build_model, pooled_f1, run_sequence, train_task

__all__ = [
    'ConfigIssue',
    'ConfigReport',
    'ModelConfig',
    'OptimizerConfig',
    'RunConfig',
    'config_from_dict',
    'load_config',
    'PROBE_KINDS',
    'ShuffleResult',
    'SweepResult',
    'run_metrics',
    'run_probe',
    'shuffle_grid',
    'stability_plasticity',
    'sweep_lambda',
    'train_probe_model',
    'EmitResult',
    'emit_reports',
    'metrics_document',
    'write_shuffle',
    'write_sweep',
    'write_table',
    'RunArtifacts',
    'build_model',
    'pooled_f1',
    'run_sequence',
    'train_task',
]
