"""Sequential fine-tuning without regularisation"""

from typing import Optional, Tuple

import numpy as np

from ..core.network import Batch, ClassifierModel
from ..core.params import ArrayLike, as_array
from .base import ImportanceMap, Strategy


def naive_task_end() -> None:
    """Nothing to consolidate"""
    return None


class NaiveStrategy(Strategy):
    """Penalty is always zero and Omega stays all-zero"""

    name = "naive"

    def __init__(self, lam: float = 0.0):
        super().__init__(lam)

    def penalty_and_grad(self, params: ArrayLike) -> Tuple[float, np.ndarray]:
        return 0.0, np.zeros_like(as_array(params))

    def on_task_end(self, model: ClassifierModel, task: Batch, rng: np.random.Generator):
        naive_task_end()
        self.importance = ImportanceMap.zeros(model.params)

    def task_importance(
        self, model: ClassifierModel, task: Batch, rng: np.random.Generator
    ) -> Optional[np.ndarray]:
        return None
