"""Feed-forward classifier with exact reverse-mode gradients over a flat ParamVector"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..errors import PreconditionError, ShapeError
from .params import ParamVector

logger = logging.getLogger(__name__)


class Activation(str, Enum):
    ELU = "elu"
    TANH = "tanh"


def _activate(kind: Activation, z: np.ndarray) -> np.ndarray:
    if kind is Activation.ELU:
        # alpha = 1.0; expm1 on the clipped branch keeps large z from overflowing
        return np.where(z > 0, z, np.expm1(np.minimum(z, 0.0)))
    return np.tanh(z)


def _activate_grad(kind: Activation, z: np.ndarray) -> np.ndarray:
    if kind is Activation.ELU:
        return np.where(z > 0, 1.0, np.exp(np.minimum(z, 0.0)))
    return 1.0 - np.tanh(z) ** 2


@dataclass
class Batch:
    """Labelled samples: inputs (n x D) and integer labels (n,)"""
    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=np.float64))
        self.labels = np.asarray(self.labels, dtype=np.int64).ravel()
        if self.inputs.shape[0] != self.labels.size:
            raise ShapeError(
                f"Batch has {self.inputs.shape[0]} input rows but {self.labels.size} labels"
            )
        if self.labels.size and self.labels.min() < 0:
            raise PreconditionError("Labels must be non-negative class indices")

    def __len__(self) -> int:
        return self.labels.size

    def subset(self, indices: Union[Sequence[int], np.ndarray]) -> "Batch":
        indices = np.asarray(indices, dtype=np.int64)
        return Batch(self.inputs[indices], self.labels[indices])


def layer_group_names(n_layers: int) -> List[str]:
    """Layer prefixes: layer1, layer2, ..., out"""
    return [f"layer{i + 1}" for i in range(n_layers - 1)] + ["out"]


def param_layout(layer_sizes: Sequence[int]) -> List[Tuple[str, int, int]]:
    """Group table (name, start, length) for an MLP, weight before bias per layer"""
    groups = []
    cursor = 0
    prefixes = layer_group_names(len(layer_sizes) - 1)
    for prefix, fan_in, fan_out in zip(prefixes, layer_sizes[:-1], layer_sizes[1:]):
        groups.append((f"{prefix}.weight", cursor, fan_in * fan_out))
        cursor += fan_in * fan_out
        groups.append((f"{prefix}.bias", cursor, fan_out))
        cursor += fan_out
    return groups


def init_params(layer_sizes: Sequence[int], seed: int) -> ParamVector:
    """
    Glorot-uniform weights, zero biases

    Args:
        layer_sizes: (D, H1, ..., K)
        seed: RNG seed; identical seeds give bit-identical vectors

    Returns:
        ParamVector laid out by ``param_layout``
    """
    layer_sizes = _check_layer_sizes(layer_sizes)
    rng = np.random.default_rng(seed)
    layout = param_layout(layer_sizes)
    values = np.zeros(sum(length for _, _, length in layout))

    fans = list(zip(layer_sizes[:-1], layer_sizes[1:]))
    for (name, start, length), (fan_in, fan_out) in zip(layout[0::2], fans):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        values[start:start + length] = rng.uniform(-limit, limit, size=length)

    return ParamVector(values, layout)


def _check_layer_sizes(layer_sizes: Sequence[int]) -> Tuple[int, ...]:
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2 or min(sizes) < 1:
        raise PreconditionError(f"Invalid layer sizes {list(layer_sizes)}")
    return sizes


class ClassifierModel:
    """
    MLP D -> H1 -> ... -> K with a shared hidden activation and linear output

    Weights are stored torch-style as (fan_out, fan_in) matrices flattened
    row-major, so ``logits = h @ W.T + b``.
    """

    def __init__(
        self,
        layer_sizes: Sequence[int],
        activation: Union[str, Activation] = Activation.ELU,
        params: ParamVector = None,
        seed: int = 0,
    ):
        self.layer_sizes = _check_layer_sizes(layer_sizes)
        self.activation = Activation(activation)
        if params is None:
            params = init_params(self.layer_sizes, seed)
        expected = sum(length for _, _, length in param_layout(self.layer_sizes))
        if len(params) != expected:
            raise ShapeError(
                f"Layer sizes {list(self.layer_sizes)} need {expected} parameters, got {len(params)}"
            )
        self.params = params

    def __repr__(self) -> str:
        return (
            f"ClassifierModel(layer_sizes={list(self.layer_sizes)}, "
            f"activation={self.activation.value}, n_params={self.n_params})"
        )

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_classes(self) -> int:
        return self.layer_sizes[-1]

    @property
    def n_params(self) -> int:
        return len(self.params)

    def copy(self) -> "ClassifierModel":
        return ClassifierModel(self.layer_sizes, self.activation, self.params.copy())

    def with_params(self, values) -> "ClassifierModel":
        """Same architecture, different parameter values"""
        return ClassifierModel(self.layer_sizes, self.activation, self.params.with_values(values))

    def layers(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """(W, b) views per layer; W has shape (fan_out, fan_in)"""
        out = []
        prefixes = layer_group_names(len(self.layer_sizes) - 1)
        for prefix, fan_in, fan_out in zip(prefixes, self.layer_sizes[:-1], self.layer_sizes[1:]):
            W = self.params.group(f"{prefix}.weight").reshape(fan_out, fan_in)
            b = self.params.group(f"{prefix}.bias")
            out.append((W, b))
        return out


def _check_inputs(model: ClassifierModel, inputs: np.ndarray) -> np.ndarray:
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    if inputs.shape[1] != model.input_size:
        raise ShapeError(
            f"Input width {inputs.shape[1]} does not match model input size {model.input_size}"
        )
    return inputs


def _check_batch(model: ClassifierModel, batch: Batch):
    if len(batch) == 0:
        raise PreconditionError("Batch is empty")
    if batch.labels.max() >= model.n_classes:
        raise PreconditionError(
            f"Label {batch.labels.max()} out of range for {model.n_classes} classes"
        )


def _forward_cache(model: ClassifierModel, inputs: np.ndarray):
    """Forward pass keeping layer inputs and pre-activations for backprop"""
    layers = model.layers()
    acts = [inputs]
    pres = []
    h = inputs
    for i, (W, b) in enumerate(layers):
        z = h @ W.T + b
        pres.append(z)
        h = z if i == len(layers) - 1 else _activate(model.activation, z)
        acts.append(h)
    return layers, acts, pres


def _backward(model: ClassifierModel, cache, upstream: np.ndarray, per_sample: bool) -> np.ndarray:
    """
    Backpropagate dL/dlogits through the network

    Args:
        upstream: (n, K) gradient of the objective w.r.t. the logits
        per_sample: keep one gradient row per sample instead of summing

    Returns:
        (n, P) array when per_sample, else (P,)
    """
    layers, acts, pres = cache
    n = upstream.shape[0]
    delta = upstream
    pieces = []
    for i in range(len(layers) - 1, -1, -1):
        W, _ = layers[i]
        a_prev = acts[i]
        if per_sample:
            dW = (delta[:, :, None] * a_prev[:, None, :]).reshape(n, -1)
            db = delta
        else:
            dW = (delta.T @ a_prev).ravel()
            db = delta.sum(axis=0)
        pieces.append((dW, db))
        if i > 0:
            delta = (delta @ W) * _activate_grad(model.activation, pres[i - 1])

    flat = []
    for dW, db in reversed(pieces):
        flat.extend([dW, db])
    return np.concatenate(flat, axis=1 if per_sample else 0)


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction"""
    return np.exp(_log_softmax(np.atleast_2d(logits)))


def forward(model: ClassifierModel, batch: Union[Batch, np.ndarray]) -> np.ndarray:
    """Logits (n x K) for a batch or a raw input matrix"""
    inputs = batch.inputs if isinstance(batch, Batch) else batch
    inputs = _check_inputs(model, inputs)
    _, acts, _ = _forward_cache(model, inputs)
    return acts[-1]


def nll_loss_and_grad(model: ClassifierModel, batch: Batch) -> Tuple[float, ParamVector]:
    """Mean negative log-likelihood and its gradient w.r.t. the parameters"""
    _check_batch(model, batch)
    inputs = _check_inputs(model, batch.inputs)
    cache = _forward_cache(model, inputs)
    logits = cache[1][-1]
    log_probs = _log_softmax(logits)
    n = len(batch)
    rows = np.arange(n)
    loss = float(-log_probs[rows, batch.labels].mean())

    upstream = np.exp(log_probs)
    upstream[rows, batch.labels] -= 1.0
    grad = _backward(model, cache, upstream / n, per_sample=False)
    return loss, model.params.with_values(grad)


def grads_for_labels(model: ClassifierModel, inputs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """
    Per-sample NLL gradients for arbitrary (observed or imputed) labels

    Returns:
        (n, P) array, row i is the gradient of -log p(labels[i] | inputs[i])
    """
    inputs = _check_inputs(model, inputs)
    labels = np.asarray(labels, dtype=np.int64).ravel()
    if labels.size != inputs.shape[0]:
        raise ShapeError(f"{inputs.shape[0]} inputs but {labels.size} labels")
    cache = _forward_cache(model, inputs)
    upstream = softmax(cache[1][-1])
    upstream[np.arange(labels.size), labels] -= 1.0
    return _backward(model, cache, upstream, per_sample=True)


def per_sample_grad_matrix(model: ClassifierModel, batch: Batch) -> np.ndarray:
    """(n, P) per-sample NLL gradients at the observed labels"""
    _check_batch(model, batch)
    return grads_for_labels(model, batch.inputs, batch.labels)


def per_sample_grads(model: ClassifierModel, batch: Batch) -> List[ParamVector]:
    """One NLL gradient ParamVector per sample; their mean equals the batch gradient"""
    return [model.params.with_values(row) for row in per_sample_grad_matrix(model, batch)]


def per_sample_output_norm_grads(model: ClassifierModel, batch: Union[Batch, np.ndarray]) -> np.ndarray:
    """(n, P) gradients of ||F(x_i)||_2^2 per sample"""
    inputs = batch.inputs if isinstance(batch, Batch) else batch
    inputs = _check_inputs(model, inputs)
    if inputs.shape[0] == 0:
        raise PreconditionError("Batch is empty")
    cache = _forward_cache(model, inputs)
    return _backward(model, cache, 2.0 * cache[1][-1], per_sample=True)


def output_norm_grad(model: ClassifierModel, batch: Union[Batch, np.ndarray]) -> ParamVector:
    """Mean over samples of the gradient of the squared L2 norm of the logits"""
    inputs = batch.inputs if isinstance(batch, Batch) else batch
    inputs = _check_inputs(model, inputs)
    if inputs.shape[0] == 0:
        raise PreconditionError("Batch is empty")
    cache = _forward_cache(model, inputs)
    grad = _backward(model, cache, 2.0 * cache[1][-1] / inputs.shape[0], per_sample=False)
    return model.params.with_values(grad)


def predict(model: ClassifierModel, inputs: np.ndarray) -> np.ndarray:
    """Argmax class index per row"""
    return forward(model, inputs).argmax(axis=1)


def accuracy(model: ClassifierModel, batch: Batch) -> float:
    if len(batch) == 0:
        raise PreconditionError("Batch is empty")
    return float(np.mean(predict(model, batch.inputs) == batch.labels))
