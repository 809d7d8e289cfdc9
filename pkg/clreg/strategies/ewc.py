"""Online EWC: running empirical-Fisher importance"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.network import Batch, ClassifierModel, per_sample_grad_matrix
from ..core.params import ArrayLike, as_array
from ..errors import PreconditionError
from ..utils.seeding import SeedLike, as_rng
from .base import ImportanceMap, Strategy

logger = logging.getLogger(__name__)


@dataclass
class EwcState:
    """Running Fisher F* = gamma * F*_prev + F_task"""
    running_fisher: np.ndarray
    gamma: float = 0.9
    n_fisher: int = 500

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise PreconditionError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.n_fisher < 1:
            raise PreconditionError("n_fisher must be >= 1")


def fisher_sample_indices(n_data: int, n_fisher: int, rng: np.random.Generator) -> np.ndarray:
    """Without replacement when the data is large enough, with replacement otherwise"""
    if n_data < 1:
        raise PreconditionError("Cannot estimate Fisher information on empty data")
    if n_fisher <= n_data:
        return rng.choice(n_data, size=n_fisher, replace=False)
    return rng.choice(n_data, size=n_fisher, replace=True)


def ewc_estimate_fisher(
    model: ClassifierModel, data: Batch, n_fisher: int, seed: SeedLike
) -> np.ndarray:
    """
    Diagonal empirical Fisher from batch-size-1 NLL gradients at observed labels

    Args:
        model: model at the end of the task
        data: task training data
        n_fisher: number of samples to draw
        seed: int seed or generator for the subset draw

    Returns:
        (P,) array (1/n) sum_i g_i * g_i
    """
    if len(data) == 0:
        raise PreconditionError("Cannot estimate Fisher information on empty data")
    indices = fisher_sample_indices(len(data), n_fisher, as_rng(seed))
    grads = per_sample_grad_matrix(model, data.subset(indices))
    return np.mean(grads * grads, axis=0)


def ewc_task_end(
    state: EwcState, new_fisher: ArrayLike, params: ArrayLike
) -> Tuple[EwcState, ImportanceMap]:
    """Fold the task Fisher into the running estimate and re-anchor at ``params``"""
    new_fisher = as_array(new_fisher)
    if np.any(new_fisher < 0):
        raise PreconditionError("Fisher estimate must be non-negative")
    running = state.gamma * state.running_fisher + new_fisher
    updated = EwcState(running, state.gamma, state.n_fisher)
    return updated, ImportanceMap(running, params)


class EwcStrategy(Strategy):
    """Online EWC with a single consolidated (running Fisher, anchor) pair"""

    name = "ewc"

    def __init__(self, lam: float, gamma: float = 0.9, n_fisher: int = 500):
        super().__init__(lam)
        self.gamma = gamma
        self.n_fisher = n_fisher
        self.state: Optional[EwcState] = None

    def on_task_end(self, model: ClassifierModel, task: Batch, rng: np.random.Generator):
        if self.state is None:
            self.state = EwcState(np.zeros(model.n_params), self.gamma, self.n_fisher)
        fisher = ewc_estimate_fisher(model, task, self.n_fisher, rng)
        self.state, self.importance = ewc_task_end(self.state, fisher, model.params)
        logger.debug(f"EWC running Fisher mean {self.state.running_fisher.mean():.3e}")

    def task_importance(
        self, model: ClassifierModel, task: Batch, rng: np.random.Generator
    ) -> Optional[np.ndarray]:
        return ewc_estimate_fisher(model, task, self.n_fisher, rng)
