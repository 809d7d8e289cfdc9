"""Train-test accuracy matrix and the ACC / BWT / FWT metrics"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..errors import PreconditionError, ShapeError, UndefinedMetricError


@dataclass
class AccuracyMatrix:
    """
    R[i, j]: test accuracy on task j after training on tasks 0..i

    ``b[j]`` is the test accuracy on task j of the model at initialization,
    measured before any gradient step.
    """
    R: np.ndarray
    b: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.R = np.atleast_2d(np.asarray(self.R, dtype=np.float64))
        if self.R.shape[0] != self.R.shape[1]:
            raise ShapeError(f"Accuracy matrix must be square, got {self.R.shape}")
        if self.b is not None:
            self.b = np.asarray(self.b, dtype=np.float64).ravel()
            if self.b.size != self.T:
                raise ShapeError(f"Baseline has {self.b.size} entries for {self.T} tasks")
        for name, values in (("R", self.R), ("b", self.b)):
            if values is not None and values.size and (
                np.nanmin(values) < 0.0 or np.nanmax(values) > 1.0
            ):
                raise PreconditionError(f"{name} entries must lie in [0, 1]")

    @property
    def T(self) -> int:
        return self.R.shape[0] if self.R.size else 0

    @classmethod
    def empty(cls, n_tasks: int) -> "AccuracyMatrix":
        return cls(np.zeros((n_tasks, n_tasks)), np.zeros(n_tasks))


def _require_tasks(M: AccuracyMatrix, minimum: int, metric: str):
    if M.T < minimum:
        raise UndefinedMetricError(f"{metric} needs at least {minimum} task(s), got {M.T}")


def final_acc(M: AccuracyMatrix) -> float:
    """Mean accuracy over all tasks after the last phase"""
    _require_tasks(M, 1, "final ACC")
    return float(M.R[-1].mean())


def learning_curve(M: AccuracyMatrix) -> np.ndarray:
    """Per phase i: mean accuracy over the tasks seen so far (j <= i)"""
    _require_tasks(M, 1, "learning curve")
    return np.array([M.R[i, : i + 1].mean() for i in range(M.T)])


def mean_acc(M: AccuracyMatrix) -> float:
    """Average over phases of the per-phase seen-task accuracy"""
    return float(learning_curve(M).mean())


def bwt(M: AccuracyMatrix) -> float:
    """Backward transfer: mean of R[T-1, i] - R[i, i] over i < T-1"""
    _require_tasks(M, 2, "BWT")
    T = M.T
    return float(np.mean([M.R[T - 1, i] - M.R[i, i] for i in range(T - 1)]))


def fwt(M: AccuracyMatrix) -> float:
    """Forward transfer: mean of R[i-1, i] - b[i] over i >= 1"""
    _require_tasks(M, 2, "FWT")
    if M.b is None:
        raise UndefinedMetricError("FWT needs the random-initialization baseline b")
    return float(np.mean([M.R[i - 1, i] - M.b[i] for i in range(1, M.T)]))


def write_accuracy_csv(M: AccuracyMatrix, path: Union[str, Path]) -> Path:
    """R rows labelled by phase, plus an ``init`` row holding b"""
    path = Path(path)
    columns = [f"task_{j}" for j in range(M.T)]
    frame = pd.DataFrame(M.R, columns=columns)
    frame.insert(0, "phase", [str(i) for i in range(M.T)])
    baseline = M.b if M.b is not None else np.full(M.T, np.nan)
    init_row = pd.DataFrame([["init", *baseline]], columns=["phase", *columns])
    pd.concat([frame, init_row], ignore_index=True).to_csv(path, index=False, lineterminator="\n")
    return path


def read_accuracy_csv(path: Union[str, Path]) -> AccuracyMatrix:
    frame = pd.read_csv(path, dtype={"phase": str}, float_precision="round_trip")
    init = frame[frame["phase"] == "init"]
    body = frame[frame["phase"] != "init"]
    R = body.drop(columns="phase").to_numpy(dtype=np.float64)
    b = None
    if len(init):
        b = init.drop(columns="phase").to_numpy(dtype=np.float64).ravel()
        if np.all(np.isnan(b)):
            b = None
    return AccuracyMatrix(R, b)
