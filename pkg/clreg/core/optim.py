"""SGD and Adam steps that report (gradient, parameter delta) pairs"""

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..errors import PreconditionError
from .params import ArrayLike, ParamVector, as_array, check_same_length


@dataclass
class StepRecord:
    """Gradient used for a step and the resulting change theta_{t+1} - theta_t"""
    grad: np.ndarray
    delta: np.ndarray


@dataclass
class AdamState:
    """First/second moment estimates and hyperparameters of one Adam run"""
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    lr: float = 0.001

    def __post_init__(self):
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise PreconditionError(f"Adam betas must lie in [0, 1), got {self.beta1}, {self.beta2}")
        if self.t < 0:
            raise PreconditionError("Adam step counter must be non-negative")

    @classmethod
    def fresh(cls, n_params: int, lr: float = 0.001, beta1: float = 0.9,
              beta2: float = 0.999, eps: float = 1e-8) -> "AdamState":
        return cls(np.zeros(n_params), np.zeros(n_params), 0, beta1, beta2, eps, lr)


def sgd_step(params: ParamVector, grad: ArrayLike, lr: float) -> StepRecord:
    """In-place ``params -= lr * grad``"""
    if lr <= 0:
        raise PreconditionError(f"Learning rate must be positive, got {lr}")
    g = as_array(grad)
    check_same_length(params.values, g)
    delta = -lr * g
    params.values += delta
    return StepRecord(grad=g.copy(), delta=delta)


def adam_step(params: ParamVector, grad: ArrayLike, state: AdamState) -> StepRecord:
    """
    In-place bias-corrected Adam update

    ``state`` keeps the raw (uncorrected) moments so callers can inspect m_t, v_t.
    """
    g = as_array(grad)
    check_same_length(params.values, g, state.m, state.v)

    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * g
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * g * g
    m_hat = state.m / (1.0 - state.beta1 ** state.t)
    v_hat = state.v / (1.0 - state.beta2 ** state.t)

    delta = -state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    params.values += delta
    return StepRecord(grad=g.copy(), delta=delta)


class SGD:
    """Plain gradient descent with a fixed learning rate"""

    name = "sgd"

    def __init__(self, lr: float):
        if lr <= 0:
            raise PreconditionError(f"Learning rate must be positive, got {lr}")
        self.lr = lr
        self.state = None

    def step(self, params: ParamVector, grad: ArrayLike) -> StepRecord:
        return sgd_step(params, grad, self.lr)


@dataclass
class Adam:
    """Adam with lazily created state sized on the first step"""
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    state: Optional[AdamState] = field(default=None, repr=False)

    name = "adam"

    def step(self, params: ParamVector, grad: ArrayLike) -> StepRecord:
        if self.state is None:
            self.state = AdamState.fresh(len(params), self.lr, self.beta1, self.beta2, self.eps)
        return adam_step(params, grad, self.state)


Optimizer = Union[SGD, Adam]


def make_optimizer(name: str, lr: float) -> Optimizer:
    """Build an optimizer by name ('sgd' or 'adam')"""
    name = name.lower()
    if name == "sgd":
        return SGD(lr)
    if name == "adam":
        if lr <= 0:
            raise PreconditionError(f"Learning rate must be positive, got {lr}")
        return Adam(lr=lr)
    raise PreconditionError(f"Unknown optimizer '{name}' (expected 'sgd' or 'adam')")
