"""Per-channel normalization and overlapping windowing"""

from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import DegenerateError, PreconditionError
from .filters import MultiChannelSignal


@dataclass(frozen=True)
class WindowSpec:
    chunk: int
    overlap: int = 0

    def __post_init__(self):
        if self.chunk < 1 or not 0 <= self.overlap < self.chunk:
            raise PreconditionError(
                f"Need 0 <= overlap < chunk, got chunk={self.chunk}, overlap={self.overlap}"
            )

    @property
    def stride(self) -> int:
        return self.chunk - self.overlap

    def count(self, n_samples: int) -> int:
        """Number of full windows in ``n_samples``"""
        if n_samples < self.chunk:
            return 0
        return (n_samples - self.chunk) // self.stride + 1


def window_segments(sig: MultiChannelSignal, spec: WindowSpec) -> List[np.ndarray]:
    """C x chunk windows starting at 0, stride, 2*stride, ..."""
    n = sig.n_samples
    if n < spec.chunk:
        raise PreconditionError(f"Signal of {n} samples is shorter than one {spec.chunk}-sample window")
    starts = range(0, n - spec.chunk + 1, spec.stride)
    return [sig.data[:, start:start + spec.chunk].copy() for start in starts]


def mean_std_normalize(sig: MultiChannelSignal) -> MultiChannelSignal:
    """Zero mean, unit population std per channel"""
    mean = sig.data.mean(axis=1, keepdims=True)
    std = sig.data.std(axis=1, keepdims=True)
    if np.any(std == 0.0):
        constant = np.flatnonzero(std.ravel() == 0.0).tolist()
        raise DegenerateError(f"Cannot normalize constant channel(s) {constant}")
    return sig.replace((sig.data - mean) / std)
