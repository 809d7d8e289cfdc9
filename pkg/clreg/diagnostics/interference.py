"""Gradient interference between consecutive tasks on shared important parameters"""

import logging
import math
from typing import TYPE_CHECKING, Dict, Optional, Sequence

import numpy as np

from ..errors import DegenerateError, PreconditionError
from .models import DiagnosticReport, ProbeRow
from .stats import cosine_similarity

if TYPE_CHECKING:
    from ..runner.training import RunArtifacts

logger = logging.getLogger(__name__)

DEFAULT_TOPK_FRACS = (0.05, 0.20, 1.0)


def top_fraction(importance: Optional[np.ndarray], frac: float, n_params: int) -> np.ndarray:
    """
    Indices of the ceil(frac * P) most important parameters

    Ties go to the lower index. ``None`` importance selects every parameter.
    """
    if not 0.0 < frac <= 1.0:
        raise PreconditionError(f"Top-k fraction must lie in (0, 1], got {frac}")
    if importance is None:
        return np.arange(n_params)
    k = max(1, math.ceil(frac * n_params))
    indices = np.arange(n_params)
    order = np.lexsort((indices, -np.asarray(importance, dtype=np.float64)))
    return np.sort(order[:k])


def gradient_interference(
    grad_prev: np.ndarray,
    grad_next: np.ndarray,
    importance_prev: Optional[np.ndarray],
    importance_next: Optional[np.ndarray],
    topk_fracs: Sequence[float] = DEFAULT_TOPK_FRACS,
) -> Dict[float, Dict[str, float]]:
    """
    Cosine of two task gradients restricted to their shared top-f parameters

    Returns:
        frac -> {"overlap": |S|, "cosine": ...}; "cosine" is absent and
        "empty" is 1 when the intersection is empty or a gradient vanishes on it
    """
    grad_prev = np.asarray(grad_prev, dtype=np.float64).ravel()
    grad_next = np.asarray(grad_next, dtype=np.float64).ravel()
    n_params = grad_prev.size
    out = {}
    for frac in topk_fracs:
        shared = np.intersect1d(
            top_fraction(importance_prev, frac, n_params),
            top_fraction(importance_next, frac, n_params),
        )
        values = {"frac": float(frac), "overlap": float(shared.size), "empty": 0.0}
        try:
            if shared.size == 0:
                raise DegenerateError("empty intersection")
            values["cosine"] = cosine_similarity(grad_prev[shared], grad_next[shared])
        except DegenerateError:
            values["empty"] = 1.0
        out[float(frac)] = values
    return out


def probe_gradient_interference(
    artifacts: "RunArtifacts", topk_fracs: Sequence[float] = DEFAULT_TOPK_FRACS
) -> DiagnosticReport:
    """
    Interference for every consecutive task pair of a run

    Both gradients are evaluated at the parameters task tau+1 inherits.
    The earlier task is ranked by cumulative Omega after tau, the later
    one by its standalone importance at task start.
    """
    T = len(artifacts.task_start_grads)
    if T < 2:
        raise PreconditionError("Interference needs at least 2 tasks")
    naive = artifacts.strategy == "naive"
    rows = []
    for tau in range(T - 1):
        importance_prev = None if naive else artifacts.omega_snapshots[tau]
        importance_next = None if naive else artifacts.task_importances[tau + 1]
        results = gradient_interference(
            artifacts.prev_task_grads[tau + 1],
            artifacts.task_start_grads[tau + 1],
            importance_prev,
            importance_next,
            topk_fracs,
        )
        for frac, values in results.items():
            rows.append(ProbeRow(key=f"{tau}->{tau + 1}@{frac:g}", values={"task": float(tau), **values}))
    flagged = sum(1 for row in rows if row.values["empty"])
    if flagged:
        logger.warning(f"{flagged} interference rows had an empty shared parameter set")
    return DiagnosticReport("interference", rows)
