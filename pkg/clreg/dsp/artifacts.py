"""Kurtosis-based rejection of artefact components"""

import logging
from typing import List, Tuple

import numpy as np
from scipy import stats

from ..errors import DegenerateError, PreconditionError

logger = logging.getLogger(__name__)


def excess_kurtosis(x) -> float:
    """Population excess kurtosis m4 / m2^2 - 3"""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size < 4:
        raise PreconditionError(f"Kurtosis needs at least 4 samples, got {x.size}")
    if np.var(x) == 0.0:
        raise DegenerateError("Kurtosis is undefined for a constant input")
    return float(stats.kurtosis(x, fisher=True, bias=True))


def kurtosis_zscores(components: np.ndarray) -> np.ndarray:
    """
    z-scores of per-component excess kurtosis

    With C components no |z| can exceed sqrt(C - 1); identical kurtoses give
    all-zero z.
    """
    kurt = np.array([excess_kurtosis(row) for row in components])
    spread = kurt.std()
    if spread == 0.0:
        return np.zeros_like(kurt)
    return (kurt - kurt.mean()) / spread


def reject_by_kurtosis(components, z_thresh: float = 4.0) -> Tuple[np.ndarray, List[int]]:
    """
    Zero every component whose kurtosis z-score exceeds ``z_thresh`` in magnitude

    Args:
        components: C x N unmixed sources from any external decomposition
        z_thresh: rejection threshold (``inf`` disables rejection)

    Returns:
        (cleaned copy of components, sorted rejected indices)
    """
    components = np.atleast_2d(np.asarray(components, dtype=np.float64))
    if components.shape[0] < 2:
        raise PreconditionError("Need at least 2 components to z-score kurtosis")
    z = kurtosis_zscores(components)
    rejected = [int(i) for i in np.flatnonzero(np.abs(z) > z_thresh)]
    cleaned = components.copy()
    cleaned[rejected] = 0.0
    if rejected:
        logger.info(f"Rejected components {rejected} (|z| > {z_thresh})")
    return cleaned, rejected
