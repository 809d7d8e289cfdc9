"""Subject-incremental training loop and the artifacts it records"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.network import Batch, ClassifierModel, accuracy, nll_loss_and_grad
from ..core.optim import make_optimizer
from ..errors import NumericalError
from ..metrics.classification import ConfusionCounts, confusion, macro_f1, model_f1
from ..metrics.continual import AccuracyMatrix
from ..strategies import Strategy, make_strategy
from ..stream.generator import SubjectTask, generate_stream, reorder_stream
from ..utils.seeding import derive_rng, derive_seed
from .config import RunConfig

logger = logging.getLogger(__name__)


@dataclass
class RunArtifacts:
    """Everything recorded while training one strategy over one subject order"""
    strategy: str
    lam: float
    seed: int
    matrix: AccuracyMatrix
    task_ids: List[int]
    group_layout: List[Tuple[str, int, int]]
    theta_init: np.ndarray
    theta_snapshots: List[np.ndarray] = field(default_factory=list)
    omega_snapshots: List[np.ndarray] = field(default_factory=list)
    task_start_grads: List[np.ndarray] = field(default_factory=list)
    prev_task_grads: List[Optional[np.ndarray]] = field(default_factory=list)
    task_importances: List[Optional[np.ndarray]] = field(default_factory=list)
    train_f1: List[float] = field(default_factory=list)
    train_acc: List[float] = field(default_factory=list)
    final_loss: List[float] = field(default_factory=list)
    compromise_norms: List[Dict[str, float]] = field(default_factory=list)
    wall_clock: List[float] = field(default_factory=list)
    unseen_f1: Optional[float] = None
    unseen_f1_by_subject: Dict[int, float] = field(default_factory=dict)

    @property
    def T(self) -> int:
        return len(self.task_ids)


def build_model(config: RunConfig, seed: int) -> ClassifierModel:
    return ClassifierModel(config.layer_sizes, config.model.activation, seed=derive_seed(seed, "init"))


def _non_finite_record(task_index: int, epoch: int, step: int, loss: float, penalty: float) -> dict:
    return {"task": task_index, "epoch": epoch, "step": step, "loss": loss, "penalty": penalty}


def train_task(
    model: ClassifierModel,
    data: Batch,
    strategy: Strategy,
    config: RunConfig,
    seed: int,
    task_index: int = 0,
) -> float:
    """
    Fixed-epoch minibatch training on one task with the strategy penalty

    Minibatch order is re-drawn every epoch from its own derived stream.
    The strategy sees the task-loss gradient, never the penalty gradient.

    Returns:
        mean task loss of the last epoch
    """
    optimizer = make_optimizer(config.optimizer.name, config.optimizer.lr)
    n = len(data)
    batch_size = min(config.batch_size, n)
    epoch_loss = float("nan")
    for epoch in range(config.epochs):
        order = derive_rng(seed, "batches", task_index, epoch).permutation(n)
        losses = []
        for step, start in enumerate(range(0, n, batch_size)):
            batch = data.subset(order[start:start + batch_size])
            loss, grad = nll_loss_and_grad(model, batch)
            penalty, penalty_grad = strategy.penalty_and_grad(model.params)
            if not (np.isfinite(loss) and np.isfinite(penalty)):
                record = _non_finite_record(task_index, epoch, step, loss, penalty)
                logger.warning(f"Non-finite objective: {record}")
                raise NumericalError(f"Non-finite loss at task {task_index}, epoch {epoch}, step {step}", record)
            step_record = optimizer.step(model.params, grad.values + penalty_grad)
            strategy.on_step(grad.values, step_record)
            losses.append(loss)
        epoch_loss = float(np.mean(losses))
        logger.debug(f"task {task_index} epoch {epoch}: loss {epoch_loss:.4f}")
    return epoch_loss


def _compromise_norms(model: ClassifierModel, data: Batch, strategy: Strategy) -> Dict[str, float]:
    """Task-gradient norm against penalty-gradient norm at the end of training"""
    _, grad = nll_loss_and_grad(model, data)
    _, penalty_grad = strategy.penalty_and_grad(model.params)
    return {
        "task_grad_norm": float(np.linalg.norm(grad.values)),
        "penalty_grad_norm": float(np.linalg.norm(penalty_grad)),
    }


def pooled_f1(model: ClassifierModel, tasks: Sequence[SubjectTask]) -> float:
    """Macro F1 over the pooled train and test samples of ``tasks``"""
    counts = sum(
        (confusion(model, split).counts for task in tasks for split in (task.train, task.test)),
        np.zeros((model.n_classes, model.n_classes), dtype=np.int64),
    )
    return macro_f1(ConfusionCounts(counts))


def run_sequence(
    config: RunConfig,
    seed: Optional[int] = None,
    stream: Optional[Sequence[SubjectTask]] = None,
    holdout: Optional[Sequence[SubjectTask]] = None,
    order: Optional[Sequence[int]] = None,
) -> RunArtifacts:
    """
    Train one strategy over the subject stream

    Args:
        config: validated run configuration
        seed: run seed for initialization, minibatches and importance draws
            (defaults to the first of ``config.seeds``)
        stream, holdout: pre-generated subjects; generated from
            ``config.stream`` when omitted
        order: optional permutation of the stream

    Returns:
        RunArtifacts with the full accuracy matrix and per-task snapshots
    """
    config.require_valid()
    seed = config.seeds[0] if seed is None else seed
    if stream is None:
        stream, holdout = generate_stream(config.stream)
    if order is not None:
        stream = reorder_stream(stream, order)
    holdout = list(holdout or [])

    model = build_model(config, seed)
    strategy = make_strategy(config.strategy, config.lam, config.gamma, config.xi_damp, config.n_fisher)
    logger.info(
        f"Run {config.strategy} lam={config.lam} seed={seed} over subjects {[t.id for t in stream]}"
    )

    baseline = np.array([accuracy(model, task.test) for task in stream])
    R = np.zeros((len(stream), len(stream)))
    artifacts = RunArtifacts(
        strategy=config.strategy,
        lam=config.lam,
        seed=seed,
        matrix=AccuracyMatrix(R, baseline),
        task_ids=[task.id for task in stream],
        group_layout=[(g.name, g.start, g.length) for g in model.params.groups],
        theta_init=model.params.values.copy(),
    )

    for tau, task in enumerate(stream):
        started = time.perf_counter()

        _, start_grad = nll_loss_and_grad(model, task.train)
        artifacts.task_start_grads.append(start_grad.values.copy())
        if tau:
            _, prev_grad = nll_loss_and_grad(model, stream[tau - 1].train)
            artifacts.prev_task_grads.append(prev_grad.values.copy())
        else:
            artifacts.prev_task_grads.append(None)
        artifacts.task_importances.append(
            strategy.task_importance(model, task.train, derive_rng(seed, "standalone-importance", tau))
        )

        strategy.on_task_start(model, task.train)
        artifacts.final_loss.append(train_task(model, task.train, strategy, config, seed, tau))
        if config.lam > 0:
            artifacts.compromise_norms.append(_compromise_norms(model, task.train, strategy))
        strategy.on_task_end(model, task.train, derive_rng(seed, "task-end", tau))

        R[tau] = [accuracy(model, other.test) for other in stream]
        artifacts.omega_snapshots.append(strategy.omega_snapshot(model.n_params))
        artifacts.theta_snapshots.append(model.params.values.copy())
        artifacts.train_f1.append(model_f1(model, task.train))
        artifacts.train_acc.append(accuracy(model, task.train))
        artifacts.wall_clock.append(time.perf_counter() - started)
        logger.info(f"  task {tau} (subject {task.id}): R row {np.round(R[tau], 3).tolist()}")

    artifacts.matrix = AccuracyMatrix(R, baseline)
    if holdout:
        artifacts.unseen_f1 = pooled_f1(model, holdout)
        artifacts.unseen_f1_by_subject = {task.id: pooled_f1(model, [task]) for task in holdout}
        logger.info(f"  unseen-subject F1 {artifacts.unseen_f1:.4f}")
    return artifacts
