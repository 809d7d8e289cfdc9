"""True vs empirical Fisher diagonals and the finite-difference Hessian check"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from ..core.network import Batch, ClassifierModel, forward, grads_for_labels, nll_loss_and_grad, softmax
from ..errors import NumericalError, PreconditionError
from ..utils.seeding import derive_rng
from .models import DiagnosticReport, ProbeRow
from .stats import cosine_similarity, pearson_or_flag, relative_l2

logger = logging.getLogger(__name__)

MAX_ENUMERATED_CLASSES = 16
MAX_HESSIAN_PARAMS = 2000


def true_fisher_diag(model: ClassifierModel, data: Batch) -> np.ndarray:
    """
    Diagonal Fisher under the model's own predictive distribution

    (1/n) sum_i sum_y p(y | x_i) g(x_i, y)^2, enumerating every class y.
    """
    if len(data) == 0:
        raise PreconditionError("Cannot compute the Fisher diagonal on empty data")
    if model.n_classes > MAX_ENUMERATED_CLASSES:
        raise PreconditionError(
            f"Enumerating {model.n_classes} classes exceeds the limit of {MAX_ENUMERATED_CLASSES}"
        )
    probs = softmax(forward(model, data.inputs))
    n = len(data)
    total = np.zeros(model.n_params)
    for y in range(model.n_classes):
        grads = grads_for_labels(model, data.inputs, np.full(n, y))
        total += probs[:, y] @ (grads * grads)
    return total / n


def empirical_fisher_diag(grads: np.ndarray) -> np.ndarray:
    """Mean of squared per-sample gradients (rows of ``grads``)"""
    grads = np.atleast_2d(grads)
    if grads.shape[0] == 0:
        raise PreconditionError("Need at least one per-sample gradient")
    return np.mean(grads * grads, axis=0)


@dataclass
class FisherDecomposition:
    """Empirical Fisher split into gradient variance and squared mean gradient"""
    fisher: np.ndarray
    variance: np.ndarray
    mean_sq: np.ndarray

    @property
    def residual(self) -> float:
        return float(np.max(np.abs(self.fisher - self.variance - self.mean_sq)))


def empirical_fisher_decomposition(grads: np.ndarray) -> FisherDecomposition:
    """fisher = Var(g) + mean(g)^2 with population variance over rows"""
    grads = np.atleast_2d(np.asarray(grads, dtype=np.float64))
    fisher = empirical_fisher_diag(grads)
    mean = grads.mean(axis=0)
    return FisherDecomposition(fisher, grads.var(axis=0), mean * mean)


def resample_labels(model: ClassifierModel, inputs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw one label per row from the model's predictive distribution"""
    probs = softmax(forward(model, inputs))
    cumulative = np.cumsum(probs, axis=1)
    draws = rng.random((probs.shape[0], 1))
    labels = (draws > cumulative).sum(axis=1)
    return np.minimum(labels, model.n_classes - 1)


def probe_fisher_convergence(
    model: ClassifierModel,
    data: Batch,
    sample_sizes: Sequence[int] = (1, 10, 100, 500),
    seeds: Sequence[int] = (0, 1, 2, 3, 4),
    resample: bool = True,
) -> DiagnosticReport:
    """
    Empirical Fisher on n samples against the true Fisher on the full data

    Args:
        model: model at which both diagonals are evaluated
        data: reference data set
        sample_sizes: subset sizes, each <= len(data)
        seeds: independent draws per size (labels and subset)
        resample: draw labels from the model instead of using the observed ones

    Returns:
        Report with mean cosine similarity and relative L2 error per size;
        stat is Pearson(log n, mean relative L2)
    """
    if len(seeds) < 1:
        raise PreconditionError("Need at least one seed")
    too_large = [n for n in sample_sizes if not 1 <= n <= len(data)]
    if too_large:
        raise PreconditionError(f"Sample sizes {too_large} outside [1, {len(data)}]")

    reference = true_fisher_diag(model, data)
    rows: List[ProbeRow] = []
    for n in sample_sizes:
        cosines, errors = [], []
        for seed in seeds:
            rng = derive_rng(seed, "fisher-convergence", n)
            labels = resample_labels(model, data.inputs, rng) if resample else data.labels
            indices = rng.choice(len(data), size=n, replace=False)
            grads = grads_for_labels(model, data.inputs[indices], labels[indices])
            estimate = empirical_fisher_diag(grads)
            cosines.append(cosine_similarity(estimate, reference))
            errors.append(relative_l2(estimate, reference))
        rows.append(ProbeRow(
            key=str(n),
            values={
                "n": float(n),
                "cosine_mean": float(np.mean(cosines)),
                "cosine_std": float(np.std(cosines)),
                "rel_l2_mean": float(np.mean(errors)),
                "rel_l2_std": float(np.std(errors)),
            },
        ))
        logger.debug(f"Fisher convergence n={n}: cosine {np.mean(cosines):.4f}")

    stat = pearson_or_flag(
        np.log([row.values["n"] for row in rows]),
        [row.values["rel_l2_mean"] for row in rows],
    )
    return DiagnosticReport("fisher", rows, stat)


def hessian_diag_fd(
    grad_fn: Callable[[np.ndarray], np.ndarray], theta: np.ndarray, eps: float = 1e-4
) -> np.ndarray:
    """
    Hessian diagonal by central differences of an analytic gradient

    H_kk ~ (grad(theta + eps e_k)[k] - grad(theta - eps e_k)[k]) / (2 eps)
    """
    theta = np.asarray(theta, dtype=np.float64).ravel()
    diag = np.empty_like(theta)
    for k in range(theta.size):
        shifted = theta.copy()
        shifted[k] = theta[k] + eps
        upper = grad_fn(shifted)[k]
        shifted[k] = theta[k] - eps
        lower = grad_fn(shifted)[k]
        diag[k] = (upper - lower) / (2.0 * eps)
    if not np.all(np.isfinite(diag)):
        bad = np.flatnonzero(~np.isfinite(diag)).tolist()
        raise NumericalError(f"Non-finite Hessian differences at {len(bad)} coordinates", {"indices": bad[:20]})
    return diag


def nll_hessian_diag(model: ClassifierModel, data: Batch, eps: float = 1e-4) -> np.ndarray:
    """Diagonal of the mean-NLL Hessian at the model's parameters"""
    if model.n_params > MAX_HESSIAN_PARAMS:
        raise PreconditionError(
            f"Finite-difference Hessian limited to {MAX_HESSIAN_PARAMS} parameters, model has {model.n_params}"
        )

    def grad_fn(values: np.ndarray) -> np.ndarray:
        return nll_loss_and_grad(model.with_params(values), data)[1].values

    return hessian_diag_fd(grad_fn, model.params.values, eps)


def flip_labels(labels: np.ndarray, n_classes: int, fraction: float, rng: np.random.Generator) -> np.ndarray:
    """Move a ``fraction`` of labels to a uniformly chosen different class"""
    if not 0.0 <= fraction <= 1.0:
        raise PreconditionError(f"Flip fraction must lie in [0, 1], got {fraction}")
    labels = np.asarray(labels, dtype=np.int64).copy()
    flipped = rng.random(labels.size) < fraction
    offsets = rng.integers(1, n_classes, size=labels.size)
    labels[flipped] = (labels[flipped] + offsets[flipped]) % n_classes
    return labels


def probe_hessian_gap(
    model: ClassifierModel, data: Batch, flip_frac: float = 0.4, seed: int = 0, eps: float = 1e-4
) -> DiagnosticReport:
    """
    Compare the NLL Hessian diagonal with the true Fisher diagonal

    Labels are drawn from the model itself (well-specified), then a
    ``flip_frac`` share of them is corrupted (misspecified). The Fisher
    reference does not depend on labels, so only the Hessian changes.
    """
    rng = derive_rng(seed, "hessian-gap")
    reference = true_fisher_diag(model, data)
    clean = resample_labels(model, data.inputs, rng)
    noisy = flip_labels(clean, model.n_classes, flip_frac, rng)

    rows = []
    for key, labels in (("well_specified", clean), ("label_noise", noisy)):
        hessian = nll_hessian_diag(model, Batch(data.inputs, labels), eps)
        rows.append(ProbeRow(
            key=key,
            values={
                "cosine": cosine_similarity(hessian, reference),
                "rel_l2": relative_l2(hessian, reference),
                "flip_frac": 0.0 if key == "well_specified" else float(flip_frac),
            },
        ))
    logger.info(
        f"Hessian/Fisher cosine: well-specified {rows[0].values['cosine']:.4f}, "
        f"label noise {rows[1].values['cosine']:.4f}"
    )
    return DiagnosticReport("hessian", rows)
