"""
Exhaustive threshold search shared by every grower.

For each feature the considered rows are sorted once and cumulative target
sums give the impurity of every left/right partition in a single pass.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from riff.src.config import GAIN_EPSILON


class Criterion(str, Enum):
    GINI = "gini"
    MSE = "mse"


@dataclass(frozen=True)
class SplitCandidate:
    """
    Best (feature, threshold) for a set of rows.

    ``criterion_gain`` is the per-sample impurity decrease; ``weighted_gain``
    (gain times the number of rows considered) ranks candidates across leaves.
    ``leaf_reference`` is (tree index, node id), or None for a prospective new root.
    """
    feature_index: int
    threshold: float
    criterion_gain: float
    n_samples: int
    leaf_reference: Optional[Tuple[int, int]] = None

    @property
    def weighted_gain(self) -> float:
        return self.criterion_gain * self.n_samples

    def at(self, leaf_reference: Optional[Tuple[int, int]]) -> "SplitCandidate":
        return SplitCandidate(
            feature_index=self.feature_index,
            threshold=self.threshold,
            criterion_gain=self.criterion_gain,
            n_samples=self.n_samples,
            leaf_reference=leaf_reference,
        )


def impurity(sums: np.ndarray, squares: np.ndarray, counts: np.ndarray, criterion: Criterion) -> np.ndarray:
    """Gini (2p(1-p)) or variance from running sums; targets must be 0/1 for gini."""
    mean = sums / counts
    if criterion is Criterion.GINI:
        return 2.0 * mean * (1.0 - mean)
    return np.maximum(squares / counts - mean * mean, 0.0)


def best_split(
    X: np.ndarray,
    targets: np.ndarray,
    rows: Optional[np.ndarray] = None,
    criterion: Criterion = Criterion.GINI,
    min_leaf: int = 1,
) -> Optional[SplitCandidate]:
    """
    Find the split of ``rows`` with the largest strictly positive criterion gain.

    Args:
        X: Feature matrix
        targets: Per-row targets aligned with ``X`` (labels for gini, residuals for mse)
        rows: Row positions to consider; all rows when None
        criterion: Impurity measure
        min_leaf: Minimum number of considered rows on each side

    Returns:
        SplitCandidate, or None when no split has gain above GAIN_EPSILON.
        Ties go to the lowest feature index, then the lowest threshold.
    """
    rows = np.arange(X.shape[0]) if rows is None else np.asarray(rows, dtype=np.int64)
    n = rows.size
    if n < 2 or n < 2 * min_leaf:
        return None

    y = np.asarray(targets, dtype=np.float64)[rows]
    total, total_sq = y.sum(), np.square(y).sum()
    parent = float(impurity(np.array(total), np.array(total_sq), np.array(float(n)), criterion))
    if parent <= GAIN_EPSILON:
        return None

    left_n = np.arange(1, n, dtype=np.float64)
    right_n = n - left_n
    size_ok = (left_n >= min_leaf) & (right_n >= min_leaf)

    best: Optional[SplitCandidate] = None
    for feature in range(X.shape[1]):
        values = X[rows, feature]
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        sorted_y = y[order]

        valid = size_ok & (sorted_values[:-1] < sorted_values[1:])
        if not valid.any():
            continue

        left_sum = np.cumsum(sorted_y)[:-1]
        left_sq = np.cumsum(np.square(sorted_y))[:-1]
        children = (
            left_n * impurity(left_sum, left_sq, left_n, criterion)
            + right_n * impurity(total - left_sum, total_sq - left_sq, right_n, criterion)
        ) / n
        gains = np.where(valid, parent - children, -np.inf)

        top = gains.max()
        # first position within tolerance of the maximum -> lowest threshold
        k = int(np.flatnonzero(gains >= top - GAIN_EPSILON)[0])
        gain = float(gains[k])
        if best is not None and gain <= best.criterion_gain + GAIN_EPSILON:
            continue

        low, high = float(sorted_values[k]), float(sorted_values[k + 1])
        threshold = (low + high) / 2.0
        if not low <= threshold < high:
            threshold = low
        best = SplitCandidate(feature_index=feature, threshold=threshold, criterion_gain=gain, n_samples=n)

    if best is None or best.criterion_gain <= GAIN_EPSILON:
        return None
    return best
