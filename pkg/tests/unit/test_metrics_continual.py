"""Unit tests for ACC, BWT, FWT and the accuracy matrix CSV"""

import numpy as np
import pytest

from clreg.errors import PreconditionError, ShapeError, UndefinedMetricError
from clreg.metrics import (
    AccuracyMatrix,
    bwt,
    final_acc,
    fwt,
    learning_curve,
    mean_acc,
    read_accuracy_csv,
    write_accuracy_csv,
)


@pytest.fixture
def two_task():
    """R = [[0.8, 0.3], [0.6, 0.9]], b = [0.25, 0.25]"""
    return AccuracyMatrix([[0.8, 0.3], [0.6, 0.9]], [0.25, 0.25])


class TestAccuracyMatrix:
    """Test matrix validation"""

    def test_not_square(self):
        """Test R must be T x T"""
        with pytest.raises(ShapeError):
            AccuracyMatrix(np.zeros((2, 3)))

    def test_baseline_length(self):
        """Test b has one entry per task"""
        with pytest.raises(ShapeError):
            AccuracyMatrix(np.zeros((2, 2)), [0.1])

    def test_entries_are_accuracies(self):
        """Test entries outside [0, 1]"""
        with pytest.raises(PreconditionError):
            AccuracyMatrix([[1.2]])

    def test_empty(self):
        """Test empty() builds a zero matrix with a zero baseline"""
        M = AccuracyMatrix.empty(3)
        assert M.T == 3
        assert M.b.shape == (3,)


class TestAccuracyMetrics:
    """Test final and mean accuracy"""

    def test_single_task(self):
        """Test T = 1"""
        M = AccuracyMatrix([[0.8]])
        assert final_acc(M) == pytest.approx(0.8)
        assert mean_acc(M) == pytest.approx(0.8)

    def test_final_acc(self, two_task):
        """Test the last row mean"""
        assert final_acc(two_task) == pytest.approx(0.75)

    def test_mean_acc(self, two_task):
        """Test the mean of per-phase seen-task accuracy"""
        np.testing.assert_allclose(learning_curve(two_task), [0.8, 0.75])
        assert mean_acc(two_task) == pytest.approx(0.775)

    def test_constant_matrix(self):
        """Test every metric of a constant matrix"""
        M = AccuracyMatrix(np.full((4, 4), 0.6), np.full(4, 0.6))
        assert final_acc(M) == pytest.approx(0.6)
        assert mean_acc(M) == pytest.approx(0.6)
        assert bwt(M) == pytest.approx(0.0)
        assert fwt(M) == pytest.approx(0.0)

    def test_mean_equals_final_for_one_task(self, rng):
        """Test mean_acc = final_acc when T = 1"""
        M = AccuracyMatrix([[rng.random()]])
        assert mean_acc(M) == final_acc(M)


class TestTransfer:
    """Test backward and forward transfer"""

    def test_bwt_hand_example(self, two_task):
        """Test BWT = 0.6 - 0.8"""
        assert bwt(two_task) == pytest.approx(-0.2)

    def test_bwt_no_forgetting(self):
        """Test a final row matching the diagonal"""
        R = np.array([[0.7, 0.1, 0.2], [0.5, 0.8, 0.3], [0.7, 0.8, 0.9]])
        assert bwt(AccuracyMatrix(R)) == pytest.approx(0.0)

    def test_bwt_constant_columns(self, rng):
        """Test columns that never change give zero BWT"""
        column_values = rng.random(4)
        R = np.tile(column_values, (4, 1))
        assert bwt(AccuracyMatrix(R)) == pytest.approx(0.0)

    def test_fwt_hand_example(self, two_task):
        """Test FWT = 0.3 - 0.25"""
        assert fwt(two_task) == pytest.approx(0.05)

    def test_fwt_matching_baseline(self):
        """Test superdiagonal equal to b gives zero"""
        R = np.array([[0.9, 0.4, 0.0], [0.0, 0.9, 0.2], [0.0, 0.0, 0.9]])
        assert fwt(AccuracyMatrix(R, [0.0, 0.4, 0.2])) == pytest.approx(0.0)

    def test_fwt_zero_baseline(self):
        """Test b = 0 gives the superdiagonal mean"""
        R = np.array([[0.9, 0.4, 0.0], [0.0, 0.9, 0.2], [0.0, 0.0, 0.9]])
        assert fwt(AccuracyMatrix(R, np.zeros(3))) == pytest.approx(0.3)

    def test_single_task_undefined(self):
        """Test BWT and FWT need two tasks"""
        M = AccuracyMatrix([[0.8]], [0.2])
        with pytest.raises(UndefinedMetricError):
            bwt(M)
        with pytest.raises(UndefinedMetricError):
            fwt(M)

    def test_fwt_needs_baseline(self):
        """Test FWT without b"""
        with pytest.raises(UndefinedMetricError):
            fwt(AccuracyMatrix(np.full((2, 2), 0.5)))


class TestAccuracyCsv:
    """Test CSV persistence"""

    def test_header_and_init_row(self, two_task, tmp_path):
        """Test layout: phase column, task columns, init row last"""
        path = write_accuracy_csv(two_task, tmp_path / "R.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "phase,task_0,task_1"
        assert lines[1].startswith("0,")
        assert lines[-1] == "init,0.25,0.25"

    def test_values_survive(self, rng, tmp_path):
        """Test arbitrary floats are read back exactly"""
        M = AccuracyMatrix(rng.random((3, 3)), rng.random(3))
        back = read_accuracy_csv(write_accuracy_csv(M, tmp_path / "R.csv"))
        assert np.array_equal(back.R, M.R)
        assert np.array_equal(back.b, M.b)

    def test_missing_baseline(self, tmp_path):
        """Test a matrix without b reads back without b"""
        M = AccuracyMatrix(np.full((2, 2), 0.5))
        back = read_accuracy_csv(write_accuracy_csv(M, tmp_path / "R.csv"))
        assert back.b is None
        assert np.array_equal(back.R, M.R)
