"""Confusion counts and macro F1"""

from dataclasses import dataclass

import numpy as np

from ..core.network import Batch, ClassifierModel, predict
from ..errors import PreconditionError, ShapeError


@dataclass
class ConfusionCounts:
    """K x K counts; rows are true classes, columns predicted classes"""
    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.atleast_2d(np.asarray(self.counts, dtype=np.int64))
        if self.counts.shape[0] != self.counts.shape[1]:
            raise ShapeError(f"Confusion counts must be square, got {self.counts.shape}")
        if np.any(self.counts < 0):
            raise PreconditionError("Confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_predictions(cls, y_true, y_pred, n_classes: int) -> "ConfusionCounts":
        y_true = np.asarray(y_true, dtype=np.int64).ravel()
        y_pred = np.asarray(y_pred, dtype=np.int64).ravel()
        if y_true.size != y_pred.size:
            raise ShapeError(f"{y_true.size} labels but {y_pred.size} predictions")
        counts = np.zeros((n_classes, n_classes), dtype=np.int64)
        np.add.at(counts, (y_true, y_pred), 1)
        return cls(counts)


def macro_f1(C: ConfusionCounts) -> float:
    """
    Unweighted mean of per-class F1

    A class with neither true nor predicted samples contributes 0.
    """
    if C.total == 0:
        raise PreconditionError("Cannot compute F1 from empty confusion counts")
    counts = C.counts.astype(np.float64)
    tp = np.diag(counts)
    predicted = counts.sum(axis=0)
    actual = counts.sum(axis=1)
    precision = np.divide(tp, predicted, out=np.zeros_like(tp), where=predicted > 0)
    recall = np.divide(tp, actual, out=np.zeros_like(tp), where=actual > 0)
    denom = precision + recall
    f1 = np.divide(2 * precision * recall, denom, out=np.zeros_like(tp), where=denom > 0)
    return float(f1.mean())


def confusion(model: ClassifierModel, batch: Batch) -> ConfusionCounts:
    """Confusion counts of ``model`` predictions on a labelled batch"""
    if len(batch) == 0:
        raise PreconditionError("Batch is empty")
    return ConfusionCounts.from_predictions(batch.labels, predict(model, batch.inputs), model.n_classes)


def model_f1(model: ClassifierModel, batch: Batch) -> float:
    return macro_f1(confusion(model, batch))
