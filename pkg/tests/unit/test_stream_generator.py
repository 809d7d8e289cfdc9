"""Unit tests for the synthetic subject stream"""

import json
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from clreg.errors import PreconditionError
from clreg.stream import (
    StreamSpec,
    bayes_accuracy,
    export_stream_csv,
    generate_stream,
    generate_subject,
    load_subject_csv,
    reorder_stream,
    rotate,
    rotation_pairs,
    shuffle_stream,
    subject_means,
)


def _nearest_mean(inputs, means):
    distances = ((inputs[:, None, :] - means[None, :, :]) ** 2).sum(axis=2)
    return distances.argmin(axis=1)


class TestStreamSpec:
    """Test spec validation"""

    def test_defaults_are_valid(self):
        """Test the default desk-scale spec"""
        spec = StreamSpec()
        assert spec.issues() == []
        assert (spec.D, spec.K, spec.n_subjects, spec.n_holdout) == (16, 4, 10, 2)

    @pytest.mark.parametrize("field,value", [
        ("spike_prob", 1.5),
        ("label_flip", -0.1),
        ("holdout_frac", 0.6),
        ("n_train", 0),
        ("K", 1),
        ("noise_sigma", -1.0),
    ])
    def test_invalid_fields(self, field, value):
        """Test each constraint is reported against its field"""
        spec = replace(StreamSpec(), **{field: value})
        assert field in [name for name, _ in spec.issues()]
        with pytest.raises(PreconditionError):
            generate_stream(spec)

    def test_base_means_shape(self):
        """Test explicit means must be K x D"""
        spec = StreamSpec(D=2, K=2, base_means=[[1.0, 0.0]])
        assert "base_means" in [name for name, _ in spec.issues()]


class TestGenerateStream:
    """Test subject generation"""

    def test_holdout_split(self, tiny_spec):
        """Test one of four subjects is held out and ids are disjoint"""
        stream, holdout = generate_stream(tiny_spec)
        assert len(stream) == 3 and len(holdout) == 1
        ids = [t.id for t in stream] + [t.id for t in holdout]
        assert sorted(ids) == [0, 1, 2, 3]
        assert [t.id for t in stream] == sorted(t.id for t in stream)

    def test_split_sizes(self, tiny_spec):
        """Test train and test sizes per subject"""
        stream, _ = generate_stream(tiny_spec)
        for task in stream:
            assert task.train.inputs.shape == (60, 4)
            assert len(task.test) == 30

    def test_deterministic(self, tiny_spec):
        """Test identical specs give bit-identical streams"""
        first, _ = generate_stream(tiny_spec)
        second, _ = generate_stream(tiny_spec)
        for a, b in zip(first, second):
            assert np.array_equal(a.train.inputs, b.train.inputs)
            assert np.array_equal(a.test.labels, b.test.labels)

    def test_seed_changes_stream(self, tiny_spec):
        """Test a different seed gives different data"""
        first, _ = generate_stream(tiny_spec)
        second, _ = generate_stream(replace(tiny_spec, seed=8))
        assert not np.array_equal(first[0].train.inputs, second[0].train.inputs)

    def test_zero_shift_identical_means(self):
        """Test no rotation and no drift keep every subject's means"""
        spec = StreamSpec(D=6, K=3, n_subjects=4, shift_angle=0.0, drift_scale=0.0, holdout_frac=0.0)
        stream, _ = generate_stream(spec)
        for task in stream[1:]:
            np.testing.assert_allclose(task.gen_params.means, stream[0].gen_params.means, atol=1e-12)

    def test_noiseless_samples_on_means(self):
        """Test zero noise puts every sample on its class mean"""
        spec = StreamSpec(D=5, K=3, n_subjects=2, noise_sigma=0.0, holdout_frac=0.0)
        stream, _ = generate_stream(spec)
        for task in stream:
            means = task.gen_params.means
            np.testing.assert_allclose(task.train.inputs, means[task.train.labels], atol=1e-12)

    def test_hand_rotation(self):
        """Test a quarter turn of means (1, 0) and (-1, 0)"""
        spec = StreamSpec(
            D=2, K=2, n_subjects=2, shift_angle=np.pi / 2, drift_scale=0.0,
            holdout_frac=0.0, base_means=[[1.0, 0.0], [-1.0, 0.0]],
        )
        np.testing.assert_allclose(subject_means(spec, 1), [[0.0, 1.0], [0.0, -1.0]], atol=1e-12)

    def test_drift_moves_means(self):
        """Test drift translates all class means by the same unit-direction step"""
        spec = StreamSpec(D=4, K=2, shift_angle=0.0, drift_scale=0.5)
        shift = subject_means(spec, 2) - subject_means(spec, 0)
        np.testing.assert_allclose(shift[0], shift[1], atol=1e-12)
        assert np.linalg.norm(shift[0]) == pytest.approx(1.0)

    def test_means_pairwise_distinct(self, tiny_spec):
        """Test class means never coincide"""
        stream, _ = generate_stream(tiny_spec)
        means = stream[0].gen_params.means
        for i in range(len(means)):
            for j in range(i + 1, len(means)):
                assert np.linalg.norm(means[i] - means[j]) > 1e-9

    def test_spikes(self):
        """Test spike_prob = 1 offsets exactly one coordinate per sample"""
        spec = StreamSpec(D=6, K=2, n_subjects=1, noise_sigma=0.0, spike_prob=1.0, spike_scale=10.0, holdout_frac=0.0)
        task = generate_subject(spec, 0)
        offsets = task.train.inputs - task.gen_params.means[task.train.labels]
        np.testing.assert_allclose(np.sort(offsets, axis=1)[:, -1], 10.0)
        assert np.all(np.count_nonzero(np.abs(offsets) > 1e-9, axis=1) == 1)

    def test_total_label_flip(self):
        """Test label_flip = 1 never reports the generating class"""
        spec = StreamSpec(D=4, K=3, n_subjects=1, noise_sigma=0.0, label_flip=1.0, holdout_frac=0.0)
        task = generate_subject(spec, 0)
        true = _nearest_mean(task.train.inputs, task.gen_params.means)
        assert np.all(task.train.labels != true)

    def test_noiseless_is_separable(self):
        """Test the nearest-mean (linear) rule is perfect without noise"""
        spec = StreamSpec(D=8, K=4, n_subjects=3, noise_sigma=0.0, holdout_frac=0.0)
        for task in generate_stream(spec)[0]:
            assert np.array_equal(_nearest_mean(task.train.inputs, task.gen_params.means), task.train.labels)

    def test_train_test_exchangeable(self):
        """Test per-class train and test means agree (Bonferroni at 0.01)"""
        spec = StreamSpec(D=4, K=2, n_subjects=1, n_train=1000, n_test=1000, holdout_frac=0.0)
        task = generate_subject(spec, 0)
        p_values = []
        for k in range(spec.K):
            train = task.train.inputs[task.train.labels == k]
            test = task.test.inputs[task.test.labels == k]
            p_values.extend(stats.ttest_ind(train, test, axis=0).pvalue)
        assert min(p_values) > 0.01 / len(p_values)

    def test_angle_monotone_in_shift(self):
        """Test larger shift_angle increases the angle between consecutive subjects"""
        angles = []
        for shift in (0.1, 0.3, 0.6):
            spec = StreamSpec(D=8, K=3, n_subjects=4, shift_angle=shift, drift_scale=0.0)
            per_pair = []
            for s in range(spec.n_subjects - 1):
                a = subject_means(spec, s).ravel()
                b = subject_means(spec, s + 1).ravel()
                per_pair.append(np.arccos(np.clip(a @ b / np.linalg.norm(a) / np.linalg.norm(b), -1, 1)))
            angles.append(np.mean(per_pair))
        assert angles[0] < angles[1] < angles[2]


class TestRotation:
    """Test Givens rotations"""

    def test_pairs_disjoint(self):
        """Test every coordinate appears at most once"""
        pairs = rotation_pairs(7, rotation_seed=3)
        flat = [c for pair in pairs for c in pair]
        assert len(flat) == len(set(flat)) == 6

    def test_composition(self, rng):
        """Test rotations by a then b equal one rotation by a + b"""
        pairs = rotation_pairs(6, rotation_seed=1)
        x = rng.standard_normal((3, 6))
        np.testing.assert_allclose(rotate(rotate(x, 0.3, pairs), 0.5, pairs), rotate(x, 0.8, pairs), atol=1e-12)

    def test_norm_preserved(self, rng):
        """Test rotation is orthogonal"""
        pairs = rotation_pairs(5, rotation_seed=2)
        x = rng.standard_normal((4, 5))
        np.testing.assert_allclose(np.linalg.norm(rotate(x, 1.1, pairs), axis=1), np.linalg.norm(x, axis=1))


class TestBayesAccuracy:
    """Test the Monte-Carlo accuracy ceiling"""

    def test_noiseless(self):
        """Test zero noise and no flips give 1.0"""
        task = generate_subject(StreamSpec(D=3, K=3, n_subjects=1, noise_sigma=0.0), 0)
        assert bayes_accuracy(task, n=2000) == 1.0

    def test_total_flip(self):
        """Test every observed label flipped with K = 2"""
        task = generate_subject(StreamSpec(D=3, K=2, n_subjects=1, noise_sigma=0.0, label_flip=1.0), 0)
        assert bayes_accuracy(task, n=2000) == 0.0

    def test_gaussian_closed_form(self):
        """Test means +-1, sigma 1 in one dimension gives Phi(1)"""
        spec = StreamSpec(D=1, K=2, n_subjects=1, noise_sigma=1.0, base_means=[[1.0], [-1.0]], holdout_frac=0.0)
        task = generate_subject(spec, 0)
        assert bayes_accuracy(task) == pytest.approx(stats.norm.cdf(1.0), abs=0.01)

    def test_missing_generator_params(self, tiny_spec):
        """Test a loaded subject has no oracle"""
        task = generate_subject(tiny_spec, 0)
        task.gen_params = None
        with pytest.raises(PreconditionError):
            bayes_accuracy(task)


class TestShuffle:
    """Test subject-order permutations"""

    def test_same_seed_same_order(self, tiny_spec):
        """Test determinism"""
        stream, _ = generate_stream(replace(tiny_spec, holdout_frac=0.0))
        first = [t.id for t in shuffle_stream(stream, 5)]
        assert first == [t.id for t in shuffle_stream(stream, 5)]

    def test_bijection(self, tiny_spec):
        """Test the shuffled stream holds the same subjects"""
        stream, _ = generate_stream(replace(tiny_spec, holdout_frac=0.0))
        shuffled = shuffle_stream(stream, 11)
        assert {t.id for t in shuffled} == {t.id for t in stream}
        assert all(any(s is t for t in stream) for s in shuffled)

    def test_identity_order(self, tiny_spec):
        """Test reorder by the identity permutation"""
        stream, _ = generate_stream(tiny_spec)
        assert reorder_stream(stream, range(len(stream))) == stream

    def test_invalid_order(self, tiny_spec):
        """Test a non-permutation"""
        stream, _ = generate_stream(tiny_spec)
        with pytest.raises(PreconditionError):
            reorder_stream(stream, [0, 0, 1])

    def test_empty(self):
        """Test shuffling nothing"""
        with pytest.raises(PreconditionError):
            shuffle_stream([], 0)


class TestCsvExport:
    """Test per-subject CSV files"""

    def test_layout(self, tiny_spec, tmp_path):
        """Test one file per subject plus the manifest"""
        stream, _ = generate_stream(tiny_spec)
        paths = export_stream_csv(stream, tmp_path, spec=tiny_spec)
        assert [p.name for p in paths] == [f"subject_{t.id}.csv" for t in stream]
        header = paths[0].read_text().splitlines()[0]
        assert header == "x_0,x_1,x_2,x_3,label"
        manifest = json.loads((tmp_path / "stream.json").read_text())
        assert manifest["order"] == [t.id for t in stream]
        assert manifest["spec"]["D"] == 4

    def test_load_back(self, tiny_spec, tmp_path):
        """Test a subject file reads back bit-identical"""
        task = generate_subject(tiny_spec, 2)
        (path,) = export_stream_csv([task], tmp_path)
        loaded = load_subject_csv(path, n_train=tiny_spec.n_train, subject=2)
        assert np.array_equal(loaded.train.inputs, task.train.inputs)
        assert np.array_equal(loaded.test.labels, task.test.labels)
        assert loaded.gen_params is None
