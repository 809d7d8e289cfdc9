"""Minimal classifier, exact gradients and optimizers"""

from .params import ParamGroup, ParamVector, as_array
from .network import (
    Activation,
    Batch,
    ClassifierModel,
    accuracy,
    forward,
    grads_for_labels,
    init_params,
    nll_loss_and_grad,
    output_norm_grad,
    per_sample_grad_matrix,
    per_sample_grads,
    per_sample_output_norm_grads,
    predict,
    softmax,
)
from .optim import SGD, Adam, AdamState, StepRecord, adam_step, make_optimizer, sgd_step

__all__ = [
    'ParamGroup',
    'ParamVector',
    'as_array',
    'Activation',
    'Batch',
    'ClassifierModel',
    'accuracy',
    'forward',
    'grads_for_labels',
    'init_params',
    'nll_loss_and_grad',
    'output_norm_grad',
    'per_sample_grad_matrix',
    'per_sample_grads',
    'per_sample_output_norm_grads',
    'predict',
    'softmax',
    'SGD',
    'Adam',
    'AdamState',
    'StepRecord',
    'adam_step',
    'make_optimizer',
    'sgd_step',
]
