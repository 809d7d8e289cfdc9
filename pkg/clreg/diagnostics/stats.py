"""Pearson correlation, one-sample t-test and vector similarity measures"""

import logging
from typing import Optional

import numpy as np
from scipy import special

from ..errors import DegenerateError, PreconditionError, ShapeError
from .models import StatResult

logger = logging.getLogger(__name__)


def student_t_sf(t: float, df: float) -> float:
    """P(T > t) for Student-t with ``df`` degrees of freedom via the regularized incomplete beta"""
    if df <= 0:
        raise PreconditionError(f"Degrees of freedom must be positive, got {df}")
    if np.isinf(t):
        return 0.0 if t > 0 else 1.0
    tail = 0.5 * float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))
    return tail if t >= 0 else 1.0 - tail


def _paired(xs, ys):
    xs = np.asarray(xs, dtype=np.float64).ravel()
    ys = np.asarray(ys, dtype=np.float64).ravel()
    if xs.size != ys.size:
        raise ShapeError(f"Pearson needs paired samples, got {xs.size} and {ys.size}")
    return xs, ys


def pearson(xs, ys) -> StatResult:
    """
    Pearson r with a two-sided p-value

    Args:
        xs, ys: paired samples, n >= 3, neither constant

    Returns:
        StatResult(kind='pearson'); p from t = r sqrt((n-2)/(1-r^2)) on n-2 dof
    """
    xs, ys = _paired(xs, ys)
    n = xs.size
    if n < 3:
        raise PreconditionError(f"Pearson needs at least 3 points, got {n}")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateError("Pearson correlation is undefined for a constant input")
    r = float(np.clip(np.dot(dx, dy) / np.sqrt(sxx * syy), -1.0, 1.0))
    df = n - 2
    if abs(r) == 1.0:
        p = 0.0
    else:
        # df / (df + t^2) reduces to 1 - r^2
        p = float(special.betainc(df / 2.0, 0.5, 1.0 - r * r))
    return StatResult(statistic=r, p_value=min(max(p, 0.0), 1.0), n=n, kind="pearson")


def pearson_or_flag(xs, ys) -> Optional[StatResult]:
    """
    Pearson for probe output: None below 3 points, flagged degenerate on constant input

    A degenerate result carries r = 0 and p = 1.
    """
    xs, ys = _paired(xs, ys)
    if xs.size < 3:
        return None
    try:
        return pearson(xs, ys)
    except DegenerateError:
        logger.warning(f"Degenerate Pearson input over {xs.size} points, reporting p = 1")
        return StatResult(statistic=0.0, p_value=1.0, n=int(xs.size), kind="pearson", degenerate=True)


def t_test_one_sample_greater(xs, mu0: float) -> StatResult:
    """One-sided test of H0: mean <= mu0 with sample standard deviation (ddof=1)"""
    xs = np.asarray(xs, dtype=np.float64).ravel()
    n = xs.size
    if n < 2:
        raise PreconditionError(f"t-test needs at least 2 samples, got {n}")
    s = float(xs.std(ddof=1))
    if s == 0.0:
        raise DegenerateError("t-test is undefined for zero sample variance")
    t = float((xs.mean() - mu0) / (s / np.sqrt(n)))
    return StatResult(statistic=t, p_value=student_t_sf(t, n - 1), n=n, kind="t_one_sample")


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size != b.size:
        raise ShapeError(f"Cannot compare vectors of length {a.size} and {b.size}")
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0.0:
        raise DegenerateError("Cosine similarity of a zero vector")
    return float(np.clip(np.dot(a, b) / norm, -1.0, 1.0))


def relative_l2(estimate, reference) -> float:
    """||estimate - reference|| / ||reference||"""
    estimate = np.asarray(estimate, dtype=np.float64).ravel()
    reference = np.asarray(reference, dtype=np.float64).ravel()
    if estimate.size != reference.size:
        raise ShapeError(f"Cannot compare vectors of length {estimate.size} and {reference.size}")
    scale = np.linalg.norm(reference)
    if scale == 0.0:
        raise DegenerateError("Relative error against a zero reference")
    return float(np.linalg.norm(estimate - reference) / scale)
