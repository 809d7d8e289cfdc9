"""Synthetic subject-incremental task streams"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..core.network import Batch
from ..errors import PreconditionError
from ..utils.seeding import derive_rng, derive_seed

logger = logging.getLogger(__name__)


@dataclass
class StreamSpec:
    """
    Knobs of the synthetic stream

    shift_angle rotates class means between consecutive subjects,
    drift_scale translates them, noise_sigma / spike_* / label_flip control
    within-subject noise. ``base_means`` (K x D) overrides the seeded
    default class means.
    """
    D: int = 16
    K: int = 4
    n_subjects: int = 10
    n_train: int = 400
    n_test: int = 100
    shift_angle: float = 0.6
    drift_scale: float = 0.5
    noise_sigma: float = 1.0
    spike_prob: float = 0.0
    spike_scale: float = 10.0
    label_flip: float = 0.0
    holdout_frac: float = 0.2
    mean_scale: float = 3.0
    seed: int = 0
    base_means: Optional[List[List[float]]] = None

    def issues(self) -> List[Tuple[str, str]]:
        """(field, message) pairs for every violated constraint"""
        problems = []
        for name in ("D", "K", "n_subjects", "n_train", "n_test"):
            if int(getattr(self, name)) < 1:
                problems.append((name, f"{name} must be >= 1"))
        if self.K < 2:
            problems.append(("K", "need at least 2 classes"))
        for name in ("spike_prob", "label_flip"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                problems.append((name, f"{name} must lie in [0, 1], got {value}"))
        if not 0.0 <= self.holdout_frac <= 0.5:
            problems.append(("holdout_frac", f"holdout_frac must lie in [0, 0.5], got {self.holdout_frac}"))
        for name in ("noise_sigma", "spike_scale", "drift_scale", "mean_scale"):
            if getattr(self, name) < 0:
                problems.append((name, f"{name} must be >= 0"))
        if self.seed < 0:
            problems.append(("seed", "seed must be >= 0"))
        if self.base_means is not None:
            means = np.asarray(self.base_means, dtype=np.float64)
            if means.shape != (self.K, self.D):
                problems.append(("base_means", f"base_means must be {self.K}x{self.D}, got {means.shape}"))
        return problems

    def validate(self):
        problems = self.issues()
        if problems:
            raise PreconditionError("; ".join(message for _, message in problems))

    @property
    def n_holdout(self) -> int:
        return int(round(self.holdout_frac * self.n_subjects))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class GeneratorParams:
    """Everything the oracles need to know about how a subject was drawn"""
    means: np.ndarray
    rotation_seed: int
    noise_sigma: float
    spike_prob: float
    spike_scale: float
    label_flip: float


@dataclass(eq=False)
class SubjectTask:
    """One synthetic subject: train/test batches plus its generator parameters"""
    id: int
    train: Batch
    test: Batch
    gen_params: Optional[GeneratorParams] = field(default=None, repr=False)


def base_class_means(spec: StreamSpec) -> np.ndarray:
    """K x D means of subject 0"""
    if spec.base_means is not None:
        return np.asarray(spec.base_means, dtype=np.float64)
    rng = derive_rng(spec.seed, "base-means")
    while True:
        raw = rng.standard_normal((spec.K, spec.D))
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
        means = spec.mean_scale * raw / norms
        if _pairwise_distinct(means):
            return means


def _pairwise_distinct(means: np.ndarray) -> bool:
    diffs = means[:, None, :] - means[None, :, :]
    distances = np.linalg.norm(diffs, axis=2)
    return bool(np.all(distances[~np.eye(len(means), dtype=bool)] > 1e-9))


def rotation_pairs(D: int, rotation_seed: int) -> List[Tuple[int, int]]:
    """Disjoint coordinate pairs (i < j) for the Givens rotations"""
    order = np.random.default_rng(rotation_seed).permutation(D)
    pairs = []
    for a, b in zip(order[0::2], order[1::2]):
        pairs.append((int(min(a, b)), int(max(a, b))))
    return pairs


def rotate(vectors: np.ndarray, angle: float, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """
    Apply a Givens rotation of ``angle`` on every pair to each row

    The pairs are disjoint, so the rotations commute and
    rotate(rotate(x, a), b) == rotate(x, a + b).
    """
    out = np.array(vectors, dtype=np.float64, copy=True)
    c, s = np.cos(angle), np.sin(angle)
    for i, j in pairs:
        xi, xj = out[:, i].copy(), out[:, j].copy()
        out[:, i] = c * xi - s * xj
        out[:, j] = s * xi + c * xj
    return out


def subject_means(spec: StreamSpec, subject: int, base: np.ndarray = None) -> np.ndarray:
    """Rot(s * shift_angle) mu_0 + s * drift_scale * u_s"""
    base = base_class_means(spec) if base is None else base
    rotation_seed = derive_seed(spec.seed, "rotation")
    means = rotate(base, subject * spec.shift_angle, rotation_pairs(spec.D, rotation_seed))
    if spec.drift_scale and subject:
        direction = derive_rng(spec.seed, "drift", subject).standard_normal(spec.D)
        direction /= np.linalg.norm(direction)
        means = means + subject * spec.drift_scale * direction
    return means


def _draw_split(
    rng: np.random.Generator, means: np.ndarray, n: int, spec: StreamSpec
) -> Batch:
    K, D = means.shape
    labels = rng.permutation(np.arange(n) % K)
    inputs = means[labels] + spec.noise_sigma * rng.standard_normal((n, D))

    spiked = rng.random(n) < spec.spike_prob
    coords = rng.integers(0, D, size=n)
    inputs[np.flatnonzero(spiked), coords[spiked]] += spec.spike_scale

    flipped = rng.random(n) < spec.label_flip
    offsets = rng.integers(1, K, size=n)
    observed = np.where(flipped, (labels + offsets) % K, labels)
    return Batch(inputs, observed)


def generate_subject(spec: StreamSpec, subject: int, base: np.ndarray = None) -> SubjectTask:
    """Draw one subject from its own derived RNG stream"""
    means = subject_means(spec, subject, base)
    rng = derive_rng(spec.seed, "subject", subject)
    train = _draw_split(rng, means, spec.n_train, spec)
    test = _draw_split(rng, means, spec.n_test, spec)
    params = GeneratorParams(
        means=means,
        rotation_seed=derive_seed(spec.seed, "rotation"),
        noise_sigma=spec.noise_sigma,
        spike_prob=spec.spike_prob,
        spike_scale=spec.spike_scale,
        label_flip=spec.label_flip,
    )
    return SubjectTask(id=subject, train=train, test=test, gen_params=params)


def generate_stream(spec: StreamSpec) -> Tuple[List[SubjectTask], List[SubjectTask]]:
    """
    Generate the training stream and the held-out unseen subjects

    Returns:
        (stream in subject-id order, holdout subjects in id order)
    """
    spec.validate()
    base = base_class_means(spec)
    subjects = [generate_subject(spec, s, base) for s in range(spec.n_subjects)]

    n_holdout = spec.n_holdout
    if n_holdout >= spec.n_subjects:
        raise PreconditionError("Holdout would leave no training subjects")
    held = set()
    if n_holdout:
        held = set(derive_rng(spec.seed, "holdout").choice(spec.n_subjects, n_holdout, replace=False).tolist())

    stream = [task for task in subjects if task.id not in held]
    holdout = [task for task in subjects if task.id in held]
    logger.info(
        f"Generated {len(stream)} stream subjects and {len(holdout)} held-out subjects "
        f"(D={spec.D}, K={spec.K}, shift={spec.shift_angle}, noise={spec.noise_sigma})"
    )
    return stream, holdout


def shuffle_stream(stream: Sequence[SubjectTask], seed: int) -> List[SubjectTask]:
    """Seeded permutation of subject order; subject contents are untouched"""
    if not stream:
        raise PreconditionError("Cannot shuffle an empty stream")
    order = np.random.default_rng(seed).permutation(len(stream))
    return reorder_stream(stream, order)


def reorder_stream(stream: Sequence[SubjectTask], order: Sequence[int]) -> List[SubjectTask]:
    if sorted(order) != list(range(len(stream))):
        raise PreconditionError(f"Order {list(order)} is not a permutation of {len(stream)} subjects")
    return [stream[i] for i in order]


def bayes_accuracy(task: SubjectTask, n: int = 100_000, seed: int = 0) -> float:
    """
    Monte-Carlo accuracy of the nearest-mean (Gaussian ML) classifier

    Scored against labels flipped with the subject's label_flip rate, so the
    result is the ceiling any classifier can reach on observed labels.
    """
    if task.gen_params is None:
        raise PreconditionError(f"Subject {task.id} has no generator parameters")
    params = task.gen_params
    means = params.means
    K, D = means.shape
    rng = np.random.default_rng(seed)

    labels = rng.integers(0, K, size=n)
    inputs = means[labels] + params.noise_sigma * rng.standard_normal((n, D))
    if params.spike_prob > 0:
        logger.debug("Spikes present: nearest-mean accuracy is no longer the exact Bayes rate")
        spiked = rng.random(n) < params.spike_prob
        coords = rng.integers(0, D, size=n)
        inputs[np.flatnonzero(spiked), coords[spiked]] += params.spike_scale

    distances = ((inputs[:, None, :] - means[None, :, :]) ** 2).sum(axis=2)
    predicted = distances.argmin(axis=1)

    flipped = rng.random(n) < params.label_flip
    observed = np.where(flipped, (labels + rng.integers(1, K, size=n)) % K, labels)
    return float(np.mean(predicted == observed))


def export_stream_csv(
    stream: Sequence[SubjectTask], out_dir: Union[str, Path], spec: StreamSpec = None
) -> List[Path]:
    """
    One ``subject_{id}.csv`` per subject (train rows, then test rows)

    A ``stream.json`` sidecar records the subject order, split sizes and,
    when given, the generating StreamSpec.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for task in stream:
        inputs = np.vstack([task.train.inputs, task.test.inputs])
        frame = pd.DataFrame(inputs, columns=[f"x_{d}" for d in range(inputs.shape[1])])
        frame["label"] = np.concatenate([task.train.labels, task.test.labels])
        path = out_dir / f"subject_{task.id}.csv"
        frame.to_csv(path, index=False, lineterminator="\n")
        paths.append(path)

    manifest = {
        "order": [task.id for task in stream],
        "splits": {str(task.id): {"n_train": len(task.train), "n_test": len(task.test)} for task in stream},
    }
    if spec is not None:
        manifest["spec"] = spec.to_dict()
    (out_dir / "stream.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    logger.info(f"Exported {len(paths)} subjects to {out_dir}")
    return paths


def load_subject_csv(path: Union[str, Path], n_train: int, subject: int = 0) -> SubjectTask:
    """Read back a subject written by ``export_stream_csv``"""
    frame = pd.read_csv(path, float_precision="round_trip")
    labels = frame.pop("label").to_numpy()
    inputs = frame.to_numpy(dtype=np.float64)
    return SubjectTask(
        id=subject,
        train=Batch(inputs[:n_train], labels[:n_train]),
        test=Batch(inputs[n_train:], labels[n_train:]),
    )
