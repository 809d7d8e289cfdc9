"""Growth of importance across tasks and its link to later parameter movement"""

import logging
from typing import TYPE_CHECKING, List, Sequence

import numpy as np

from ..errors import PreconditionError
from .models import DiagnosticReport, ProbeRow
from .stats import pearson_or_flag

if TYPE_CHECKING:
    from ..runner.training import RunArtifacts

logger = logging.getLogger(__name__)


def is_nondecreasing(snapshots: Sequence[np.ndarray], atol: float = 0.0) -> bool:
    """True when every coordinate of Omega never drops between consecutive tasks"""
    for before, after in zip(snapshots[:-1], snapshots[1:]):
        if np.any(np.asarray(after) < np.asarray(before) - atol):
            return False
    return True


def probe_importance_accumulation(artifacts: "RunArtifacts") -> DiagnosticReport:
    """
    Per (parameter group, task): mean Omega after the task and L2 parameter change during it

    Stat: Pearson between mean Omega after task tau and the L2 change of the
    same group during task tau+1, pooled over groups and tasks.
    """
    omegas: List[np.ndarray] = artifacts.omega_snapshots
    thetas: List[np.ndarray] = [artifacts.theta_init, *artifacts.theta_snapshots]
    T = len(omegas)
    if T == 0 or len(thetas) != T + 1:
        raise PreconditionError("Accumulation probe needs one Omega and theta snapshot per task")

    rows = []
    omega_prev, delta_next = [], []
    for name, start, length in artifacts.group_layout:
        span = slice(start, start + length)
        for tau in range(T):
            delta = float(np.linalg.norm(thetas[tau + 1][span] - thetas[tau][span]))
            mean_omega = float(np.mean(omegas[tau][span]))
            values = {"task": float(tau), "mean_omega": mean_omega, "delta_l2": delta}
            if tau + 1 < T:
                following = float(np.linalg.norm(thetas[tau + 2][span] - thetas[tau + 1][span]))
                values["next_delta_l2"] = following
                omega_prev.append(mean_omega)
                delta_next.append(following)
            rows.append(ProbeRow(key=f"{name}@{tau}", values=values))

    stat = pearson_or_flag(omega_prev, delta_next)
    report = DiagnosticReport("omega", rows, stat)
    if not is_nondecreasing(omegas) and artifacts.strategy in ("si", "mas"):
        logger.warning(f"{artifacts.strategy} Omega decreased between tasks")
    return report
