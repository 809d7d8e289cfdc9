"""Flat parameter vector with named index ranges"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..errors import PreconditionError, ShapeError

ArrayLike = Union["ParamVector", np.ndarray, Sequence[float]]


@dataclass(frozen=True)
class ParamGroup:
    """Named contiguous slice of a ParamVector"""
    name: str
    start: int
    length: int

    @property
    def stop(self) -> int:
        return self.start + self.length

    @property
    def slice(self) -> slice:
        return slice(self.start, self.stop)


class ParamVector:
    """
    Flat float64 array of model parameters plus named group ranges

    Groups are disjoint, contiguous and cover ``[0, len)`` exactly. Model,
    optimizer and strategies all exchange parameters, gradients and
    importances in this layout.
    """

    def __init__(self, values: Iterable[float], groups: Sequence[Tuple[str, int, int]]):
        self.values = np.array(values, dtype=np.float64).ravel()
        self.groups: Tuple[ParamGroup, ...] = tuple(
            g if isinstance(g, ParamGroup) else ParamGroup(*g) for g in groups
        )
        self._check_groups()

    def _check_groups(self):
        names = [g.name for g in self.groups]
        if len(set(names)) != len(names):
            raise PreconditionError(f"Duplicate parameter group names: {names}")

        cursor = 0
        for group in self.groups:
            if group.start != cursor or group.length < 0:
                raise PreconditionError(
                    f"Group '{group.name}' starts at {group.start}, expected {cursor}"
                )
            cursor = group.stop
        if cursor != self.values.size:
            raise ShapeError(
                f"Groups cover {cursor} entries but vector has {self.values.size}"
            )

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"ParamVector(n={len(self)}, groups={self.group_names})"

    @property
    def group_names(self) -> List[str]:
        return [g.name for g in self.groups]

    def group(self, name: str) -> np.ndarray:
        """View of one named group (writes go through to the vector)"""
        for g in self.groups:
            if g.name == name:
                return self.values[g.slice]
        raise KeyError(f"No parameter group named '{name}'")

    def copy(self) -> "ParamVector":
        return ParamVector(self.values.copy(), self.groups)

    def with_values(self, values: ArrayLike) -> "ParamVector":
        """New vector with the same layout and the given values"""
        values = as_array(values)
        if values.size != len(self):
            raise ShapeError(f"Expected {len(self)} values, got {values.size}")
        return ParamVector(values.copy(), self.groups)

    def zeros_like(self) -> "ParamVector":
        return ParamVector(np.zeros_like(self.values), self.groups)


def as_array(x: ArrayLike) -> np.ndarray:
    """Return the float64 values behind a ParamVector or array-like"""
    if isinstance(x, ParamVector):
        return x.values
    return np.asarray(x, dtype=np.float64).ravel()


def check_same_length(*arrays: np.ndarray):
    """Raise ShapeError unless all arrays have the same size"""
    sizes = {a.size for a in arrays}
    if len(sizes) > 1:
        raise ShapeError(f"Length mismatch: {sorted(sizes)}")
