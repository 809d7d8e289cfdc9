"""Memory Aware Synapses: label-free output-sensitivity importance"""

from typing import Optional

import numpy as np

from ..core.network import Batch, ClassifierModel, per_sample_output_norm_grads
from ..core.params import ArrayLike
from ..errors import PreconditionError
from .base import ImportanceMap, Strategy


def mas_importance(model: ClassifierModel, data: Batch) -> np.ndarray:
    """(1/n) sum_i |d ||F(x_i)||^2 / d theta|; labels are never read"""
    if len(data) == 0:
        raise PreconditionError("Cannot estimate MAS importance on empty data")
    return np.mean(np.abs(per_sample_output_norm_grads(model, data.inputs)), axis=0)


def mas_task_end(
    model: ClassifierModel, data: Batch, importance: Optional[ImportanceMap], params: ArrayLike
) -> ImportanceMap:
    """Add this task's MAS importance to Omega and re-anchor at ``params``"""
    increment = mas_importance(model, data)
    omega = increment if importance is None else importance.omega + increment
    return ImportanceMap(omega, params)


class MasStrategy(Strategy):
    name = "mas"

    def on_task_end(self, model: ClassifierModel, task: Batch, rng: np.random.Generator):
        self.importance = mas_task_end(model, task, self.importance, model.params)

    def task_importance(
        self, model: ClassifierModel, task: Batch, rng: np.random.Generator
    ) -> Optional[np.ndarray]:
        return mas_importance(model, task)
