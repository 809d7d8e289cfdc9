"""Label transforms used by the EEG preprocessing pipelines"""

from typing import Union

import numpy as np

from ..errors import PreconditionError

QUADRANTS = ("HAHV", "LAHV", "HALV", "LALV")


def quadrant_label(arousal, valence, threshold: float = 3.0) -> Union[int, np.ndarray]:
    """
    Map (arousal, valence) ratings to a quadrant index

    High means strictly above ``threshold``. Index order follows QUADRANTS:
    0 HAHV, 1 LAHV, 2 HALV, 3 LALV.
    """
    arousal = np.asarray(arousal, dtype=np.float64)
    valence = np.asarray(valence, dtype=np.float64)
    low_arousal = (arousal <= threshold).astype(np.int64)
    low_valence = (valence <= threshold).astype(np.int64)
    index = low_arousal + 2 * low_valence
    return int(index) if index.ndim == 0 else index


def trinary_label(score) -> Union[int, np.ndarray]:
    """{-1, 0, 1} (negative, neutral, positive) -> {0, 1, 2}"""
    score = np.asarray(score, dtype=np.int64)
    if np.any((score < -1) | (score > 1)):
        raise PreconditionError("Trinary scores must be -1, 0 or 1")
    index = score + 1
    return int(index) if index.ndim == 0 else index
