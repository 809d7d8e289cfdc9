"""Lambda sweeps, subject-order shuffle grids, stability-plasticity comparison and probe dispatch"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.network import Batch
from ..diagnostics import (
    DiagnosticReport,
    StatResult,
    probe_adam_path_integral,
    probe_fisher_convergence,
    probe_gradient_interference,
    probe_hessian_gap,
    probe_importance_accumulation,
    probe_mas_batch_robustness,
    probe_si_batch_inflation,
    t_test_one_sample_greater,
)
from ..errors import DegenerateError, PreconditionError, UndefinedMetricError
from ..metrics.continual import bwt, final_acc, fwt, mean_acc
from ..strategies import DEFAULT_LAMBDAS, SHIFTED_STREAM_LAMBDAS, NaiveStrategy
from ..stream.generator import generate_stream, shuffle_stream
from ..utils.seeding import derive_seed
from .config import RunConfig
from .training import RunArtifacts, build_model, run_sequence, train_task

logger = logging.getLogger(__name__)

SUMMARY_METRICS = ('mean_acc', 'final_acc', 'bwt', 'fwt', 'unseen_f1', 'final_train_f1')
PROBE_KINDS = ('fisher', 'hessian', 'si-batch', 'mas-batch', 'adam', 'interference', 'omega')


def _undefined_as_nan(metric, matrix) -> float:
    try:
        return metric(matrix)
    except UndefinedMetricError:
        return float("nan")


def run_metrics(artifacts: RunArtifacts) -> Dict[str, float]:
    """Headline metrics of one run; undefined ones are NaN"""
    M = artifacts.matrix
    return {
        "mean_acc": mean_acc(M),
        "final_acc": final_acc(M),
        "bwt": _undefined_as_nan(bwt, M),
        "fwt": _undefined_as_nan(fwt, M),
        "unseen_f1": float("nan") if artifacts.unseen_f1 is None else artifacts.unseen_f1,
        "final_train_f1": artifacts.train_f1[-1],
    }


def _one_sided_vs(values: Sequence[float], mu0: float) -> Optional[StatResult]:
    values = [v for v in values if np.isfinite(v)]
    if len(values) < 2 or not np.isfinite(mu0):
        return None
    try:
        return t_test_one_sample_greater(values, mu0)
    except DegenerateError:
        logger.warning("t-test skipped: zero variance across seeds")
        return None


@dataclass
class SweepResult:
    """Aggregated rows, per-run rows and t-tests of a lambda sweep"""
    rows: List[dict]
    runs: List[dict]
    tests: List[dict] = field(default_factory=list)

    def row(self, strategy: str, lam: float) -> dict:
        for row in self.rows:
            if row["strategy"] == strategy and row["lam"] == lam:
                return row
        raise KeyError((strategy, lam))


def _aggregate(strategy: str, lam: float, per_seed: List[Dict[str, float]]) -> dict:
    row = {"strategy": strategy, "lam": float(lam), "n_seeds": len(per_seed)}
    for name in SUMMARY_METRICS:
        values = np.array([m[name] for m in per_seed])
        row[f"{name}_mean"] = float(np.mean(values))
        row[f"{name}_std"] = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return row


def sweep_lambda(
    config: RunConfig,
    lambdas: Sequence[float],
    strategies: Optional[Sequence[str]] = None,
    seeds: Optional[Sequence[int]] = None,
) -> SweepResult:
    """
    One run per (strategy, lambda, seed) on a fixed stream

    Each non-naive (strategy, lambda) gets one-sided t-tests of its per-seed
    BWT and FWT against the naive mean (H0: mean <= naive).
    """
    if not lambdas:
        raise PreconditionError("Lambda grid must be non-empty")
    strategies = list(strategies or [config.strategy])
    seeds = list(seeds or config.seeds)
    stream, holdout = generate_stream(config.stream)

    naive_runs = [
        run_metrics(run_sequence(config.with_overrides(strategy="naive", lam=0.0), s, stream, holdout))
        for s in seeds
    ]
    naive_bwt = float(np.nanmean([m["bwt"] for m in naive_runs]))
    naive_fwt = float(np.nanmean([m["fwt"] for m in naive_runs]))

    rows, runs, tests = [], [], []
    for strategy in strategies:
        for lam in lambdas:
            if strategy == "naive":
                per_seed = naive_runs
            else:
                per_seed = [
                    run_metrics(run_sequence(config.with_overrides(strategy=strategy, lam=float(lam)), s, stream, holdout))
                    for s in seeds
                ]
            runs.extend({"strategy": strategy, "lam": float(lam), "seed": s, **m} for s, m in zip(seeds, per_seed))
            rows.append(_aggregate(strategy, lam, per_seed))
            logger.info(f"Sweep {strategy} lam={lam}: mean ACC {rows[-1]['mean_acc_mean']:.4f}")
            if strategy == "naive":
                continue
            for metric, mu0 in (("bwt", naive_bwt), ("fwt", naive_fwt)):
                result = _one_sided_vs([m[metric] for m in per_seed], mu0)
                tests.append({
                    "strategy": strategy,
                    "lam": float(lam),
                    "metric": metric,
                    "naive_mean": mu0,
                    "t": result.statistic if result else float("nan"),
                    "p_value": result.p_value if result else float("nan"),
                    "n": len(per_seed),
                })
    return SweepResult(rows, runs, tests)


@dataclass
class ShuffleResult:
    rows: List[dict]
    summary: List[dict]

    def std_for(self, strategy: str) -> float:
        for row in self.summary:
            if row["strategy"] == strategy:
                return row["unseen_f1_std"]
        raise KeyError(strategy)


def shuffle_grid(
    config: RunConfig,
    n_shuffles: int,
    strategies: Sequence[str] = ('naive', 'ewc', 'si', 'mas'),
    lambdas: Optional[Dict[str, float]] = None,
    seed: Optional[int] = None,
) -> ShuffleResult:
    """
    Re-run each strategy on permuted subject orders

    Shuffle 0 keeps the generated order; shuffle s > 0 draws its permutation
    from the stream seed. Subjects, holdout and run seed never change.
    """
    if n_shuffles < 1:
        raise PreconditionError("n_shuffles must be >= 1")
    lambdas = {**DEFAULT_LAMBDAS, **(lambdas or {})}
    seed = config.seeds[0] if seed is None else seed
    stream, holdout = generate_stream(config.stream)
    orders = [stream] + [
        shuffle_stream(stream, derive_seed(config.stream.seed, "shuffle", s)) for s in range(1, n_shuffles)
    ]

    rows, summary = [], []
    for strategy in strategies:
        scores = []
        for s, ordered in enumerate(orders):
            run = run_sequence(config.with_overrides(strategy=strategy, lam=lambdas[strategy]), seed, ordered, holdout)
            row = {
                "strategy": strategy,
                "shuffle": s,
                "order": " ".join(str(t.id) for t in ordered),
                "unseen_f1": run.unseen_f1 if run.unseen_f1 is not None else float("nan"),
            }
            row.update({f"unseen_f1_subject_{k}": v for k, v in sorted(run.unseen_f1_by_subject.items())})
            rows.append(row)
            scores.append(row["unseen_f1"])
        summary.append({
            "strategy": strategy,
            "n_shuffles": n_shuffles,
            "unseen_f1_mean": float(np.mean(scores)),
            "unseen_f1_std": float(np.std(scores, ddof=1)) if n_shuffles > 1 else 0.0,
        })
        logger.info(f"Shuffle grid {strategy}: unseen F1 std {summary[-1]['unseen_f1_std']:.4f}")
    return ShuffleResult(rows, summary)


def stability_plasticity(
    config: RunConfig,
    strategies: Sequence[str] = ('ewc', 'si', 'mas'),
    tuned: Optional[Dict[str, float]] = None,
    large_lam: float = 1e6,
    seeds: Optional[Sequence[int]] = None,
) -> List[dict]:
    """
    Tuned-lambda BWT against naive, and last-task train F1 at a very large lambda

    Returns one row per strategy with the BWT t-test and the plasticity loss.
    Missing entries of ``tuned`` come from SHIFTED_STREAM_LAMBDAS.
    """
    tuned = {**SHIFTED_STREAM_LAMBDAS, **(tuned or {})}
    seeds = list(seeds or config.seeds)
    stream, holdout = generate_stream(config.stream)

    def runs_for(strategy: str, lam: float) -> List[Dict[str, float]]:
        return [
            run_metrics(run_sequence(config.with_overrides(strategy=strategy, lam=lam), s, stream, holdout))
            for s in seeds
        ]

    naive = runs_for("naive", 0.0)
    naive_bwt = float(np.mean([m["bwt"] for m in naive]))
    naive_f1 = float(np.mean([m["final_train_f1"] for m in naive]))

    rows = []
    for strategy in strategies:
        at_tuned = runs_for(strategy, tuned[strategy])
        at_large = runs_for(strategy, large_lam)
        test = _one_sided_vs([m["bwt"] for m in at_tuned], naive_bwt)
        rows.append({
            "strategy": strategy,
            "tuned_lam": float(tuned[strategy]),
            "large_lam": float(large_lam),
            "naive_bwt": naive_bwt,
            "bwt_mean": float(np.mean([m["bwt"] for m in at_tuned])),
            "bwt_t": test.statistic if test else float("nan"),
            "bwt_p": test.p_value if test else float("nan"),
            "naive_final_train_f1": naive_f1,
            "large_final_train_f1": float(np.mean([m["final_train_f1"] for m in at_large])),
        })
        logger.info(f"Stability-plasticity {strategy}: BWT p={rows[-1]['bwt_p']:.4g}")
    return rows


def train_probe_model(config: RunConfig, seed: int, pooled: bool = False):
    """
    Naive model trained on the first stream subject, plus that subject's data

    With ``pooled`` the returned data is the subject's train and test splits
    together; the model still only sees the training split.
    """
    stream, _ = generate_stream(config.stream)
    model = build_model(config, seed)
    task = stream[0]
    train_task(model, task.train, NaiveStrategy(), config, seed)
    if not pooled:
        return model, task.train
    data = Batch(
        np.vstack([task.train.inputs, task.test.inputs]),
        np.concatenate([task.train.labels, task.test.labels]),
    )
    return model, data


def run_probe(kind: str, config: RunConfig) -> List[DiagnosticReport]:
    """Run one named probe family under ``config``"""
    seed = config.seeds[0]
    if kind == "fisher":
        model, data = train_probe_model(config, seed, pooled=True)
        sizes = sorted({n for n in (1, 10, 100, 500) if n <= len(data)} | {len(data)})
        return [probe_fisher_convergence(model, data, sizes, seeds=config.seeds)]
    if kind == "hessian":
        model, data = train_probe_model(config, seed)
        return [probe_hessian_gap(model, data, seed=seed)]
    if kind in ("si-batch", "mas-batch"):
        probe = probe_si_batch_inflation if kind == "si-batch" else probe_mas_batch_robustness
        return [probe(config.stream, seeds=config.seeds)]
    if kind == "adam":
        return [probe_adam_path_integral(config.stream, seeds=config.seeds, lr=config.optimizer.lr)]
    if kind in ("interference", "omega"):
        artifacts = run_sequence(config, seed)
        probe = probe_gradient_interference if kind == "interference" else probe_importance_accumulation
        return [probe(artifacts)]
    raise PreconditionError(f"Unknown probe '{kind}' (expected one of {', '.join(PROBE_KINDS)})")
