"""Unit tests for the regularisation strategies"""

import numpy as np
import pytest

from clreg.core import Batch, ClassifierModel, ParamVector, StepRecord, nll_loss_and_grad, per_sample_grads
from clreg.errors import PreconditionError
from clreg.runner import train_task
from clreg.strategies import (
    DEFAULT_LAMBDAS,
    STRATEGY_NAMES,
    EwcState,
    EwcStrategy,
    ImportanceMap,
    MasStrategy,
    NaiveStrategy,
    SiStrategy,
    SiTaskState,
    ewc_estimate_fisher,
    ewc_task_end,
    make_strategy,
    mas_importance,
    mas_task_end,
    penalty_and_grad,
    si_accumulate_step,
    si_task_end,
)
from clreg.strategies.ewc import fisher_sample_indices


def _scalar_model(theta):
    layout = [("out.weight", 0, 1), ("out.bias", 1, 1)]
    return ClassifierModel([1, 1], "elu", ParamVector([theta, 0.0], layout))


class TestPenalty:
    """Test the shared quadratic penalty"""

    def test_at_anchor(self):
        """Test theta = theta* costs nothing"""
        imp = ImportanceMap([2.0, 3.0], [1.0, 1.0])
        penalty, grad = penalty_and_grad(imp, [1.0, 1.0], lam=0.7)
        assert penalty == 0.0
        assert not grad.any()

    def test_hand_example(self):
        """Test Omega = [2, 0], theta* = [1, 1], theta = [3, 1], lam = 0.5"""
        imp = ImportanceMap([2.0, 0.0], [1.0, 1.0])
        penalty, grad = penalty_and_grad(imp, [3.0, 1.0], lam=0.5)
        assert penalty == pytest.approx(4.0)
        np.testing.assert_allclose(grad, [4.0, 0.0])

    def test_zero_lambda(self):
        """Test lam = 0 is inert for any Omega"""
        imp = ImportanceMap([5.0, 9.0], [0.0, 0.0])
        penalty, grad = penalty_and_grad(imp, [3.0, -4.0], lam=0.0)
        assert penalty == 0.0
        assert not grad.any()

    def test_no_importance_yet(self):
        """Test None importance before any task is consolidated"""
        penalty, grad = penalty_and_grad(None, [3.0, -4.0], lam=10.0)
        assert penalty == 0.0
        np.testing.assert_array_equal(grad, [0.0, 0.0])

    def test_negative_importance_rejected(self):
        """Test Omega must be non-negative"""
        with pytest.raises(PreconditionError):
            ImportanceMap([-1.0], [0.0])

    def test_gradient_matches_finite_differences(self, rng, central_diff):
        """Test the penalty gradient numerically"""
        imp = ImportanceMap(rng.random(6), rng.standard_normal(6))
        theta = rng.standard_normal(6)
        _, grad = penalty_and_grad(imp, theta, lam=1.3)
        numeric = central_diff(lambda t: penalty_and_grad(imp, t, 1.3)[0], theta)
        np.testing.assert_allclose(grad, numeric, rtol=1e-6, atol=1e-9)


class TestEwc:
    """Test Online EWC Fisher estimation and running update"""

    def test_confident_model_has_zero_fisher(self):
        """Test saturated predictions give vanishing gradients"""
        model = ClassifierModel([2, 2], "elu", ParamVector([1, 0, 0, 1, 0, 0], [("out.weight", 0, 4), ("out.bias", 4, 2)]))
        data = Batch([[100.0, -100.0], [-100.0, 100.0]], [0, 1])
        assert np.all(ewc_estimate_fisher(model, data, n_fisher=2, seed=0) < 1e-8)

    def test_single_sample(self, small_model, small_batch):
        """Test Fisher of one sample is g * g"""
        one = small_batch.subset([2])
        (g,) = per_sample_grads(small_model, one)
        np.testing.assert_array_equal(ewc_estimate_fisher(small_model, one, n_fisher=1, seed=0), g.values ** 2)

    def test_matches_loop_oracle(self, small_model, small_batch):
        """Test four samples against an explicit loop"""
        data = small_batch.subset([0, 1, 2, 3])
        expected = np.zeros(small_model.n_params)
        for g in per_sample_grads(small_model, data):
            expected += g.values * g.values
        expected /= 4
        np.testing.assert_allclose(ewc_estimate_fisher(small_model, data, n_fisher=4, seed=9), expected, atol=1e-12)

    def test_sample_indices(self):
        """Test without replacement when possible, with replacement otherwise"""
        rng = np.random.default_rng(0)
        small = fisher_sample_indices(10, 10, rng)
        assert sorted(small.tolist()) == list(range(10))
        large = fisher_sample_indices(3, 50, rng)
        assert large.size == 50 and large.max() < 3

    def test_empty_data(self, small_model):
        """Test Fisher on no samples"""
        with pytest.raises(PreconditionError):
            ewc_estimate_fisher(small_model, Batch(np.zeros((0, 4)), []), n_fisher=5, seed=0)

    def test_running_update(self):
        """Test F* = gamma F*_prev + F over two tasks"""
        state = EwcState(np.zeros(2), gamma=0.9)
        state, imp = ewc_task_end(state, [1.0, 2.0], [0.5, 0.5])
        np.testing.assert_allclose(state.running_fisher, [1.0, 2.0])
        state, imp = ewc_task_end(state, [1.0, 0.0], [0.1, 0.2])
        np.testing.assert_allclose(state.running_fisher, [1.9, 1.8])
        np.testing.assert_allclose(imp.omega, [1.9, 1.8])
        np.testing.assert_array_equal(imp.anchor, [0.1, 0.2])

    def test_pure_accumulation(self):
        """Test gamma = 1 sums task Fishers"""
        state = EwcState(np.zeros(1), gamma=1.0)
        for _ in range(3):
            state, _ = ewc_task_end(state, [1.0], [0.0])
        np.testing.assert_allclose(state.running_fisher, [3.0])

    def test_invalid_gamma(self):
        """Test gamma outside (0, 1]"""
        with pytest.raises(PreconditionError):
            EwcState(np.zeros(1), gamma=0.0)

    def test_strategy_task_end(self, small_model, small_batch, rng):
        """Test the strategy anchors at the end-of-task parameters"""
        strategy = EwcStrategy(lam=2.0, n_fisher=8)
        strategy.on_task_end(small_model, small_batch, rng)
        np.testing.assert_array_equal(strategy.importance.anchor, small_model.params.values)
        assert np.all(strategy.importance.omega >= 0)


class TestSi:
    """Test SI path integral and importance"""

    def test_sgd_step_increment(self):
        """Test w gains lr * g^2 under an SGD step"""
        state = SiTaskState.start([0.0], xi_damp=0.1)
        si_accumulate_step(state, StepRecord(grad=np.array([2.0]), delta=np.array([-0.2])))
        np.testing.assert_allclose(state.w, [0.4])

    def test_full_batch_sgd_sum_of_squares(self, small_model, small_batch, tiny_config):
        """Test w equals lr * sum_t g_t^2 after several full-batch SGD steps"""
        lr, epochs = 0.05, 6
        config = tiny_config.with_overrides(
            optimizer={"name": "sgd", "lr": lr}, batch_size=len(small_batch), epochs=epochs
        )
        replay = small_model.copy()
        expected = np.zeros(small_model.n_params)
        for _ in range(epochs):
            _, grad = nll_loss_and_grad(replay, small_batch)
            expected += lr * grad.values ** 2
            replay.params.values -= lr * grad.values

        strategy = SiStrategy(lam=0.0)
        strategy.on_task_start(small_model, small_batch)
        train_task(small_model, small_batch, strategy, config, seed=0)

        np.testing.assert_allclose(strategy.state.w, expected, rtol=0, atol=1e-8)
        np.testing.assert_allclose(small_model.params.values, replay.params.values, atol=1e-12)

    def test_zero_gradient_step(self):
        """Test a zero step leaves w unchanged"""
        state = SiTaskState.start([0.0, 0.0], xi_damp=0.1)
        si_accumulate_step(state, StepRecord(grad=np.zeros(2), delta=np.zeros(2)))
        assert not state.w.any()

    def test_ascent_step_decreases(self):
        """Test moving uphill makes w negative"""
        state = SiTaskState.start([0.0], xi_damp=0.1)
        si_accumulate_step(state, StepRecord(grad=np.array([2.0]), delta=np.array([0.2])))
        np.testing.assert_allclose(state.w, [-0.4])

    def test_task_end_hand_example(self):
        """Test w = 0.4, Delta = 0.2, xi = 0.01 gives Omega = 8"""
        state = SiTaskState(w=[0.4], theta_start=[0.0], xi_damp=0.01)
        imp = si_task_end(state, None, [0.2])
        np.testing.assert_allclose(imp.omega, [8.0])
        np.testing.assert_allclose(imp.anchor, [0.2])

    def test_dampening_without_displacement(self):
        """Test Delta = 0 divides by xi alone"""
        state = SiTaskState(w=[0.1], theta_start=[1.0], xi_damp=0.1)
        np.testing.assert_allclose(si_task_end(state, None, [1.0]).omega, [1.0])

    def test_zero_path_integral(self):
        """Test w = 0 leaves Omega unchanged"""
        state = SiTaskState(w=[0.0], theta_start=[0.0], xi_damp=0.1)
        prior = ImportanceMap([2.5], [0.0])
        np.testing.assert_allclose(si_task_end(state, prior, [0.3]).omega, [2.5])

    def test_negative_path_integral_clamped(self):
        """Test negative w contributes nothing"""
        state = SiTaskState(w=[-0.4], theta_start=[0.0], xi_damp=0.1)
        np.testing.assert_allclose(si_task_end(state, None, [0.2]).omega, [0.0])

    def test_state_reset_after_task_end(self):
        """Test w and theta_start restart from the new anchor"""
        state = SiTaskState(w=[0.4], theta_start=[0.0], xi_damp=0.1)
        si_task_end(state, None, [0.2])
        np.testing.assert_array_equal(state.w, [0.0])
        np.testing.assert_array_equal(state.theta_start, [0.2])

    def test_invalid_dampening(self):
        """Test xi must be positive"""
        with pytest.raises(PreconditionError):
            SiTaskState.start([0.0], xi_damp=0.0)

    def test_strategy_uses_task_gradient(self):
        """Test on_step integrates the task gradient, not the step's total gradient"""
        strategy = SiStrategy(lam=1.0, xi_damp=0.1)
        model = _scalar_model(0.0)
        strategy.on_task_start(model, Batch([[1.0]], [0]))
        record = StepRecord(grad=np.array([10.0, 10.0]), delta=np.array([-0.2, 0.0]))
        strategy.on_step(np.array([2.0, 0.0]), record)
        np.testing.assert_allclose(strategy.state.w, [0.4, 0.0])


class TestMas:
    """Test MAS output-sensitivity importance"""

    def test_zero_output_model(self, rng):
        """Test a zero model has no importance"""
        model = ClassifierModel([4, 5, 3], "elu")
        model = model.with_params(np.zeros(model.n_params))
        data = Batch(rng.standard_normal((5, 4)), np.zeros(5))
        assert not mas_importance(model, data).any()

    def test_scalar_linear_model(self):
        """Test theta = 2 on inputs {3, -3}"""
        data = Batch([[3.0], [-3.0]], [0, 0])
        omega = mas_importance(_scalar_model(2.0), data)
        np.testing.assert_allclose(omega, [36.0, 12.0])

    def test_labels_ignored(self, small_model, small_batch):
        """Test relabelling the data changes nothing"""
        relabelled = Batch(small_batch.inputs, np.zeros(len(small_batch)))
        np.testing.assert_array_equal(
            mas_importance(small_model, small_batch), mas_importance(small_model, relabelled)
        )

    def test_accumulates(self):
        """Test Omega adds across tasks"""
        data = Batch([[3.0], [-3.0]], [0, 0])
        model = _scalar_model(2.0)
        imp = mas_task_end(model, data, None, model.params)
        imp = mas_task_end(model, data, imp, model.params)
        np.testing.assert_allclose(imp.omega, [72.0, 24.0])


class TestNaive:
    """Test the unregularised baseline"""

    def test_importance_stays_zero(self, small_model, small_batch, rng):
        """Test Omega is all-zero after any number of tasks"""
        strategy = NaiveStrategy()
        for _ in range(3):
            strategy.on_task_end(small_model, small_batch, rng)
        assert not strategy.omega_snapshot(small_model.n_params).any()

    def test_penalty_always_zero(self, small_model):
        """Test penalty is (0, zeros)"""
        penalty, grad = NaiveStrategy(lam=100.0).penalty_and_grad(small_model.params)
        assert penalty == 0.0
        assert grad.shape == (small_model.n_params,)
        assert not grad.any()

    def test_no_standalone_importance(self, small_model, small_batch, rng):
        """Test naive marks every parameter as equally important"""
        assert NaiveStrategy().task_importance(small_model, small_batch, rng) is None


class TestMakeStrategy:
    """Test strategy construction"""

    @pytest.mark.parametrize("name", STRATEGY_NAMES)
    def test_known_names(self, name):
        """Test each name builds the matching class"""
        strategy = make_strategy(name, lam=DEFAULT_LAMBDAS[name])
        assert strategy.name == name

    def test_options_forwarded(self):
        """Test EWC and SI hyperparameters"""
        ewc = make_strategy("ewc", lam=1.0, gamma=0.5, n_fisher=7)
        assert (ewc.gamma, ewc.n_fisher) == (0.5, 7)
        assert make_strategy("si", lam=1.0, xi_damp=0.3).xi_damp == 0.3

    def test_unknown_name(self):
        """Test unknown strategy"""
        with pytest.raises(PreconditionError):
            make_strategy("lwf")

    def test_negative_lambda(self):
        """Test lam must be non-negative"""
        with pytest.raises(PreconditionError):
            make_strategy("mas", lam=-1.0)

    def test_omega_snapshot_before_consolidation(self):
        """Test snapshot is zero before the first task end"""
        assert not MasStrategy(1.0).omega_snapshot(4).any()
