"""Fractional-error metric, failure labels, curve aggregation."""

import numpy as np
import pytest

from batchal import metrics


class TestFractionalError:
    def test_plain_ratio(self):
        got = metrics.fractional_error([95.0, 110.0], [100.0, 100.0])
        assert np.allclose(got, [0.05, 0.10])

    def test_symmetric_in_sign_of_miss(self):
        over = metrics.fractional_error([110.0], [100.0])
        under = metrics.fractional_error([90.0], [100.0])
        assert over == under

    def test_scale_invariance(self):
        rng = np.random.default_rng(0)
        true = rng.random(50) + 0.5
        pred = true * (1 + 0.03 * rng.standard_normal(50))
        base = metrics.fractional_error(pred, true)
        scaled = metrics.fractional_error(1e6 * pred, 1e6 * true)
        assert np.allclose(base, scaled, rtol=1e-12)

    def test_near_zero_truth_uses_absolute_floor(self):
        # |0 - 1e-12| / 1e-9 floor
        got = metrics.fractional_error([1e-12], [0.0])
        assert got[0] == pytest.approx(1e-3, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            metrics.fractional_error([1.0, 2.0], [1.0])


class TestAccuracy:
    def test_mixed_errors_at_default_tolerance(self):
        true = np.full(4, 100.0)
        pred = np.array([100.0, 95.0, 94.0, 80.0])  # 0%, 5%, 6%, 20% off
        assert metrics.accuracy(pred, true) == 0.5

    def test_boundary_miss_counts_as_pass(self):
        true = np.array([40.0])
        assert metrics.accuracy(1.05 * true, true) == 1.0
        assert metrics.accuracy(1.0500001 * true, true) == 0.0

    def test_empty_predictions_rejected(self):
        with pytest.raises(ValueError):
            metrics.accuracy(np.array([]), np.array([]))

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            metrics.accuracy([1.0], [1.0], aa=0.0)
        with pytest.raises(ValueError):
            metrics.accuracy([1.0], [1.0], aa=1.0)


class TestFailureLabels:
    def test_boundary_and_clear_miss(self):
        true = np.array([40.0, 40.0])
        pred = np.array([42.0, 42.1])  # exactly 5% off, then more
        assert list(metrics.failure_labels(pred, true)) == [0.0, 1.0]

    def test_complements_accuracy_exactly(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            true = rng.standard_normal(37) * 10
            pred = true + rng.standard_normal(37)
            fails = metrics.failure_labels(pred, true)
            assert metrics.accuracy(pred, true) == 1.0 - fails.mean()


class TestAggregateCurves:
    def test_two_curve_mean_and_unbiased_std(self):
        mean, std = metrics.aggregate_curves([[0.4], [0.6]])
        assert mean[0] == pytest.approx(0.5)
        assert std[0] == pytest.approx(np.sqrt(0.02), rel=1e-12)

    def test_single_curve_has_zero_spread(self):
        mean, std = metrics.aggregate_curves([[0.1, 0.2, 0.3]])
        assert np.array_equal(mean, [0.1, 0.2, 0.3])
        assert np.array_equal(std, [0.0, 0.0, 0.0])

    def test_ragged_curves_rejected(self):
        with pytest.raises(ValueError):
            metrics.aggregate_curves([[0.1, 0.2], [0.3]])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            metrics.aggregate_curves([])
