"""Fractional-error accuracy and the failure labels derived from it."""

from __future__ import annotations

import numpy as np

# Absolute floor used in place of |y_true| when the true value is ~zero, so
# the fractional error stays defined.
ABS_FLOOR = 1e-9

# Default fractional tolerance: a prediction within 5% of the true value
# counts as a pass.
DEFAULT_TOLERANCE = 0.05


def fractional_error(pred, true) -> np.ndarray:
    """|true - pred| relative to |true|, floored at ABS_FLOOR."""
    pred = np.asarray(pred, dtype=float)
    true = np.asarray(true, dtype=float)
    if pred.shape != true.shape:
        raise ValueError("shape mismatch %r vs %r" % (pred.shape, true.shape))
    denom = np.maximum(np.abs(true), ABS_FLOOR)
    return np.abs(true - pred) / denom


def accuracy(pred, true, aa: float = DEFAULT_TOLERANCE) -> float:
    """Fraction of predictions whose fractional error is <= aa (inclusive).

    Computed as one minus the failure fraction so the identity
    ``accuracy == 1 - mean(failure_labels(...))`` holds bit for bit.
    """
    pred = np.asarray(pred, dtype=float)
    if pred.size == 0:
        raise ValueError("cannot score an empty prediction set")
    return float(1.0 - np.mean(failure_labels(pred, true, aa)))


def failure_labels(pred, true, aa: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Binary labels: 1 where the surrogate misses by more than aa."""
    if not (0 < aa < 1):
        raise ValueError("tolerance aa must lie in (0, 1)")
    return (fractional_error(pred, true) > aa).astype(float)


def aggregate_curves(curves) -> tuple[np.ndarray, np.ndarray]:
    """Mean and unbiased std of several equal-length accuracy curves.

    A single curve aggregates to itself with zero spread.
    """
    mat = np.asarray([np.asarray(c, dtype=float) for c in curves])
    if mat.ndim != 2 or mat.shape[0] == 0:
        raise ValueError("need at least one curve, all of equal length")
    mean = mat.mean(axis=0)
    if mat.shape[0] == 1:
        return mean, np.zeros_like(mean)
    return mean, mat.std(axis=0, ddof=1)
