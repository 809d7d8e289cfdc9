"""Shared quadratic-penalty machinery and the strategy lifecycle"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.network import Batch, ClassifierModel
from ..core.optim import StepRecord
from ..core.params import ArrayLike, as_array, check_same_length
from ..errors import PreconditionError


@dataclass
class ImportanceMap:
    """Per-parameter importance Omega and the anchor theta* it pulls toward"""
    omega: np.ndarray
    anchor: np.ndarray

    def __post_init__(self):
        self.omega = as_array(self.omega).copy()
        self.anchor = as_array(self.anchor).copy()
        check_same_length(self.omega, self.anchor)
        if np.any(self.omega < 0):
            raise PreconditionError("Importance must be non-negative")

    @classmethod
    def zeros(cls, params: ArrayLike) -> "ImportanceMap":
        anchor = as_array(params)
        return cls(np.zeros_like(anchor), anchor)

    def copy(self) -> "ImportanceMap":
        return ImportanceMap(self.omega, self.anchor)


def penalty_and_grad(
    importance: Optional[ImportanceMap], params: ArrayLike, lam: float
) -> Tuple[float, np.ndarray]:
    """
    lam * sum_k Omega_k (theta_k - theta*_k)^2 and its gradient

    Returns (0, zeros) when no task has been consolidated yet.
    """
    theta = as_array(params)
    if importance is None:
        return 0.0, np.zeros_like(theta)
    check_same_length(theta, importance.omega)
    diff = theta - importance.anchor
    weighted = importance.omega * diff
    penalty = float(lam * np.dot(weighted, diff))
    return penalty, 2.0 * lam * weighted


class Strategy:
    """
    Uniform lifecycle shared by every regularisation strategy

    The training loop calls ``on_task_start`` once per task,
    ``penalty_and_grad`` and ``on_step`` on every optimizer step, and
    ``on_task_end`` after the last epoch. ``importance`` is None until the
    first task has been consolidated.
    """

    name = "base"

    def __init__(self, lam: float = 0.0):
        if lam < 0:
            raise PreconditionError(f"lambda must be >= 0, got {lam}")
        self.lam = float(lam)
        self.importance: Optional[ImportanceMap] = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(lam={self.lam})"

    def on_task_start(self, model: ClassifierModel, task: Batch):
        """Hook before the first step of a task"""

    def penalty_and_grad(self, params: ArrayLike) -> Tuple[float, np.ndarray]:
        return penalty_and_grad(self.importance, params, self.lam)

    def on_step(self, task_grad: np.ndarray, step: StepRecord):
        """Hook after each optimizer step; ``task_grad`` excludes the penalty"""

    def on_task_end(self, model: ClassifierModel, task: Batch, rng: np.random.Generator):
        raise NotImplementedError

    def task_importance(
        self, model: ClassifierModel, task: Batch, rng: np.random.Generator
    ) -> Optional[np.ndarray]:
        """Standalone importance of ``task`` at the current parameters (None = all equal)"""
        raise NotImplementedError

    def omega_snapshot(self, n_params: int) -> np.ndarray:
        if self.importance is None:
            return np.zeros(n_params)
        return self.importance.omega.copy()
