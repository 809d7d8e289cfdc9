"""Continual-learning bookkeeping and classification metrics"""

from .classification import ConfusionCounts, confusion, macro_f1, model_f1
from .continual import (
    AccuracyMatrix,
    bwt,
    final_acc,
    fwt,
    learning_curve,
    mean_acc,
    read_accuracy_csv,
    write_accuracy_csv,
)

__all__ = [
    'AccuracyMatrix',
    'ConfusionCounts',
    'confusion',
    'model_f1',
    'bwt',
    'final_acc',
    'fwt',
    'learning_curve',
    'macro_f1',
    'mean_acc',
    'read_accuracy_csv',
    'write_accuracy_csv',
]
