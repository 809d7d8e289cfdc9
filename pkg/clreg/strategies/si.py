"""Synaptic Intelligence: path-integral importance accumulated per step"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.network import Batch, ClassifierModel, per_sample_grad_matrix
from ..core.optim import StepRecord
from ..core.params import ArrayLike, as_array, check_same_length
from ..errors import PreconditionError
from .base import ImportanceMap, Strategy


@dataclass
class SiTaskState:
    """Running path integral w and the parameters at task start"""
    w: np.ndarray
    theta_start: np.ndarray
    xi_damp: float = 0.1

    def __post_init__(self):
        if self.xi_damp <= 0:
            raise PreconditionError(f"xi_damp must be > 0, got {self.xi_damp}")
        self.w = as_array(self.w).copy()
        self.theta_start = as_array(self.theta_start).copy()
        check_same_length(self.w, self.theta_start)

    @classmethod
    def start(cls, params: ArrayLike, xi_damp: float) -> "SiTaskState":
        theta = as_array(params)
        return cls(np.zeros_like(theta), theta, xi_damp)


def si_accumulate_step(state: SiTaskState, step: StepRecord) -> SiTaskState:
    """w <- w - g * delta (task-loss gradient only)"""
    check_same_length(state.w, step.grad, step.delta)
    state.w -= step.grad * step.delta
    return state


def si_task_end(
    state: SiTaskState, importance: Optional[ImportanceMap], params: ArrayLike
) -> ImportanceMap:
    """
    Normalise the clamped path integral by the squared task displacement

    Omega += max(w, 0) / (Delta^2 + xi); the anchor moves to ``params``
    and ``state`` is reset in place for the next task.
    """
    theta = as_array(params)
    check_same_length(theta, state.theta_start)
    displacement = theta - state.theta_start
    increment = np.maximum(state.w, 0.0) / (displacement ** 2 + state.xi_damp)

    omega = increment if importance is None else importance.omega + increment
    state.w = np.zeros_like(theta)
    state.theta_start = theta.copy()
    return ImportanceMap(omega, theta)


class SiStrategy(Strategy):
    """SI with path integral over the task-loss gradient and cumulative Omega"""

    name = "si"

    def __init__(self, lam: float, xi_damp: float = 0.1):
        super().__init__(lam)
        self.xi_damp = xi_damp
        self.state: Optional[SiTaskState] = None

    def on_task_start(self, model: ClassifierModel, task: Batch):
        self.state = SiTaskState.start(model.params, self.xi_damp)

    def on_step(self, task_grad: np.ndarray, step: StepRecord):
        si_accumulate_step(self.state, StepRecord(grad=task_grad, delta=step.delta))

    def on_task_end(self, model: ClassifierModel, task: Batch, rng: np.random.Generator):
        self.importance = si_task_end(self.state, self.importance, model.params)

    def task_importance(
        self, model: ClassifierModel, task: Batch, rng: np.random.Generator
    ) -> Optional[np.ndarray]:
        # first-order surrogate of the path integral before any step: E[g^2]
        grads = per_sample_grad_matrix(model, task)
        return np.mean(grads * grads, axis=0)
