"""Pytest configuration and shared fixtures"""

import json

import numpy as np
import pytest

from clreg.core import Batch, ClassifierModel
from clreg.runner import ModelConfig, OptimizerConfig, RunConfig
from clreg.stream import StreamSpec


@pytest.fixture
def rng():
    """Seeded generator for test data"""
    return np.random.default_rng(1234)


@pytest.fixture
def small_model():
    """4 -> 5 -> 3 tanh MLP"""
    return ClassifierModel([4, 5, 3], "tanh", seed=3)


@pytest.fixture
def deep_model():
    """4 -> 6 -> 5 -> 3 ELU MLP (two hidden layers)"""
    return ClassifierModel([4, 6, 5, 3], "elu", seed=11)


@pytest.fixture
def small_batch(rng):
    """12 samples, 4 features, 3 classes"""
    return Batch(rng.standard_normal((12, 4)), rng.integers(0, 3, size=12))


@pytest.fixture
def tiny_spec():
    """Four subjects, one held out, small enough for unit-level runs"""
    return StreamSpec(D=4, K=3, n_subjects=4, n_train=60, n_test=30, holdout_frac=0.25, seed=7)


@pytest.fixture
def tiny_config(tiny_spec):
    """Fast run configuration over the tiny stream"""
    return RunConfig(
        stream=tiny_spec,
        model=ModelConfig(hidden=[8]),
        optimizer=OptimizerConfig(name="adam", lr=0.01),
        epochs=2,
        batch_size=16,
        seeds=[0, 1],
        shuffles=2,
    )


@pytest.fixture
def tiny_config_file(tiny_config, tmp_path):
    """tiny_config written as a JSON document"""
    path = tmp_path / "run.json"
    path.write_text(json.dumps(tiny_config.to_dict()))
    return path


@pytest.fixture
def central_diff():
    """Central finite-difference gradient of a scalar function"""
    def gradient(fn, x, eps=1e-5):
        x = np.asarray(x, dtype=np.float64)
        out = np.empty_like(x)
        for k in range(x.size):
            up = x.copy()
            up[k] += eps
            down = x.copy()
            down[k] -= eps
            out[k] = (fn(up) - fn(down)) / (2 * eps)
        return out
    return gradient


def assert_rel_close(actual, expected, rel=1e-4, floor=1e-7):
    """Per-coordinate relative error with an absolute floor for near-zero entries"""
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    error = np.abs(actual - expected) / np.maximum(np.abs(expected), floor)
    worst = np.abs(actual - expected)
    assert np.all((error < rel) | (worst < floor)), f"max rel error {error.max():.3e}"


@pytest.fixture
def rel_close():
    return assert_rel_close
