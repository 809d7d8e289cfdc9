"""Batch-size sensitivity of SI path integrals and MAS importance"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..core.network import ClassifierModel, nll_loss_and_grad
from ..core.optim import make_optimizer
from ..errors import PreconditionError
from ..strategies.mas import mas_importance
from ..strategies.si import SiTaskState, si_accumulate_step
from ..stream.generator import StreamSpec, generate_subject
from ..utils.seeding import derive_rng, derive_seed
from .models import DiagnosticReport, ProbeRow
from .stats import pearson_or_flag

logger = logging.getLogger(__name__)


@dataclass
class SingleTaskTrace:
    """What one fixed-length training run on a single subject leaves behind"""
    batch_size: int
    seed: int
    grad_variance: float
    path_integral: np.ndarray
    mas_omega: np.ndarray
    adam_v: Optional[np.ndarray] = None

    @property
    def mean_abs_w(self) -> float:
        return float(np.mean(np.abs(self.path_integral)))

    @property
    def mean_mas_omega(self) -> float:
        return float(np.mean(self.mas_omega))


def train_single_task(
    spec: StreamSpec,
    batch_size: int,
    seed: int,
    hidden: Sequence[int] = (32,),
    activation: str = "elu",
    optimizer: str = "sgd",
    lr: float = 0.01,
    n_steps: int = 300,
) -> SingleTaskTrace:
    """
    Train on subject 0 for ``n_steps`` minibatch steps with SI tracking

    The step count is fixed across batch sizes so only gradient noise
    differs between runs. Gradient variance is the per-step mean over
    coordinates of (g_batch - g_full)^2, averaged over steps.
    """
    if batch_size < 1 or n_steps < 1:
        raise PreconditionError("batch_size and n_steps must be >= 1")
    task = generate_subject(spec, 0).train
    n = len(task)
    batch_size = min(batch_size, n)
    model = ClassifierModel([spec.D, *hidden, spec.K], activation, seed=derive_seed(seed, "init"))
    opt = make_optimizer(optimizer, lr)
    si = SiTaskState.start(model.params, xi_damp=0.1)
    rng = derive_rng(seed, "batches")

    variances = []
    order = rng.permutation(n)
    cursor = 0
    for _ in range(n_steps):
        if cursor + batch_size > n:
            order = rng.permutation(n)
            cursor = 0
        batch = task.subset(order[cursor:cursor + batch_size])
        cursor += batch_size

        _, grad = nll_loss_and_grad(model, batch)
        _, full = nll_loss_and_grad(model, task)
        variances.append(float(np.mean((grad.values - full.values) ** 2)))
        record = opt.step(model.params, grad.values)
        si_accumulate_step(si, record)

    adam_v = opt.state.v.copy() if optimizer == "adam" else None
    return SingleTaskTrace(
        batch_size=batch_size,
        seed=seed,
        grad_variance=float(np.mean(variances)),
        path_integral=si.w.copy(),
        mas_omega=mas_importance(model, task),
        adam_v=adam_v,
    )


def run_batch_traces(
    spec: StreamSpec, batch_sizes: Sequence[int], seeds: Sequence[int], **train_kwargs
) -> List[SingleTaskTrace]:
    """One trace per (batch size, seed); shared by the SI and MAS probes"""
    if len(batch_sizes) < 3:
        raise PreconditionError(f"Need at least 3 batch sizes, got {len(batch_sizes)}")
    if not seeds:
        raise PreconditionError("Need at least one seed")
    traces = []
    for batch_size in batch_sizes:
        for seed in seeds:
            traces.append(train_single_task(spec, batch_size, seed, **train_kwargs))
        logger.info(f"Batch-noise traces done for batch size {batch_size}")
    return traces


def _rows_by_batch(traces: Sequence[SingleTaskTrace]) -> List[ProbeRow]:
    rows = []
    for batch_size in sorted({t.batch_size for t in traces}):
        group = [t for t in traces if t.batch_size == batch_size]
        rows.append(ProbeRow(
            key=str(batch_size),
            values={
                "batch_size": float(batch_size),
                "grad_variance": float(np.mean([t.grad_variance for t in group])),
                "mean_abs_w": float(np.mean([t.mean_abs_w for t in group])),
                "mas_omega": float(np.mean([t.mean_mas_omega for t in group])),
                "n_seeds": float(len(group)),
            },
        ))
    return rows


def _with_extras(report: DiagnosticReport, extras: dict) -> DiagnosticReport:
    report.extra_stats = {k: v for k, v in extras.items() if v is not None}
    return report


def probe_si_batch_inflation(
    spec: StreamSpec,
    batch_sizes: Sequence[int] = (1, 4, 16, 64),
    seeds: Sequence[int] = (0, 1, 2, 3, 4),
    traces: Sequence[SingleTaskTrace] = None,
    **train_kwargs,
) -> DiagnosticReport:
    """
    Does gradient noise inflate the SI path integral?

    Headline stat: Pearson(gradient variance, mean |w|) over every
    (batch size, seed) run. ``extra_stats['batch_size']`` holds
    Pearson(batch size, mean |w|).
    """
    traces = traces if traces is not None else run_batch_traces(spec, batch_sizes, seeds, **train_kwargs)
    variance = [t.grad_variance for t in traces]
    w_abs = [t.mean_abs_w for t in traces]
    report = DiagnosticReport("si_batch", _rows_by_batch(traces), pearson_or_flag(variance, w_abs))
    return _with_extras(report, {"batch_size": pearson_or_flag([t.batch_size for t in traces], w_abs)})


def probe_mas_batch_robustness(
    spec: StreamSpec,
    batch_sizes: Sequence[int] = (1, 4, 16, 64),
    seeds: Sequence[int] = (0, 1, 2, 3, 4),
    traces: Sequence[SingleTaskTrace] = None,
    **train_kwargs,
) -> DiagnosticReport:
    """
    Same harness as the SI probe, tracking MAS Omega magnitude

    Headline stat: Pearson(batch size, mean Omega); no sign is implied.
    """
    traces = traces if traces is not None else run_batch_traces(spec, batch_sizes, seeds, **train_kwargs)
    omega = [t.mean_mas_omega for t in traces]
    report = DiagnosticReport("mas_batch", _rows_by_batch(traces), pearson_or_flag([t.batch_size for t in traces], omega))
    return _with_extras(report, {"grad_variance": pearson_or_flag([t.grad_variance for t in traces], omega)})


def probe_adam_path_integral(
    spec: StreamSpec,
    seeds: Sequence[int] = (0, 1, 2),
    batch_size: int = 32,
    lr: float = 0.001,
    n_steps: int = 300,
    **train_kwargs,
) -> DiagnosticReport:
    """
    SI path integral under Adam against the square root of Adam's second moment

    One row per (seed, parameter); stat is Pearson(|w|, sqrt(v_T)) pooled.
    Correlational evidence only.
    """
    rows, w_abs, sqrt_v = [], [], []
    for seed in seeds:
        trace = train_single_task(spec, batch_size, seed, optimizer="adam", lr=lr, n_steps=n_steps, **train_kwargs)
        for k, (w, v) in enumerate(zip(np.abs(trace.path_integral), np.sqrt(trace.adam_v))):
            rows.append(ProbeRow(key=f"{seed}:{k}", values={"abs_w": float(w), "sqrt_v": float(v)}))
            w_abs.append(w)
            sqrt_v.append(v)
    return DiagnosticReport("adam", rows, pearson_or_flag(w_abs, sqrt_v))
