"""
Tests for the shared threshold search.
"""

import numpy as np
import pytest

from riff.src.be.trees.split_search import Criterion, best_split


def _gini(y: np.ndarray) -> float:
    p = y.mean()
    return 2.0 * p * (1.0 - p)


def _oracle(X: np.ndarray, y: np.ndarray, min_leaf: int):
    """Every feature, every midpoint, plain Python; first strictly better wins."""
    n = len(y)
    parent = _gini(y)
    best = None
    for feature in range(X.shape[1]):
        values = sorted(set(X[:, feature].tolist()))
        for low, high in zip(values, values[1:]):
            threshold = (low + high) / 2.0
            left = X[:, feature] <= threshold
            if left.sum() < min_leaf or (~left).sum() < min_leaf:
                continue
            children = (left.sum() * _gini(y[left]) + (~left).sum() * _gini(y[~left])) / n
            gain = parent - children
            if gain > 1e-12 and (best is None or gain > best[2] + 1e-12):
                best = (feature, threshold, gain)
    return best


def test_two_points_split_in_the_middle():
    X = np.array([[0.0], [1.0]])
    y = np.array([0, 1])

    split = best_split(X, y)

    assert split.feature_index == 0
    assert split.threshold == 0.5
    assert split.criterion_gain == pytest.approx(0.5)


def test_pure_node_has_no_split():
    X = np.array([[0.0], [1.0], [2.0]])
    assert best_split(X, np.array([1, 1, 1])) is None


def test_constant_feature_has_no_split():
    X = np.ones((6, 1))
    assert best_split(X, np.array([0, 1, 0, 1, 0, 1])) is None


def test_min_leaf_blocks_small_children():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([1, 0, 0, 0])

    assert best_split(X, y, min_leaf=2).threshold == 1.5
    assert best_split(X, y, min_leaf=3) is None


def test_ties_go_to_lowest_feature_index():
    column = np.array([0.0, 1.0, 2.0, 3.0])
    X = np.column_stack([column, column])

    split = best_split(X, np.array([0, 0, 1, 1]))

    assert split.feature_index == 0


def test_rows_restrict_the_search():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0, 1, 0, 1])

    split = best_split(X, y, rows=np.array([2, 3]))

    assert split.threshold == 2.5
    assert split.n_samples == 2


def test_mse_gain_is_variance_decrease():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    targets = np.array([-1.0, -1.0, 1.0, 1.0])

    split = best_split(X, targets, criterion=Criterion.MSE)

    assert split.threshold == 1.5
    assert split.criterion_gain == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(25))
def test_matches_exhaustive_search(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 12))
    X = rng.integers(0, 5, size=(n, 3)).astype(float)
    y = rng.integers(0, 2, size=n)
    min_leaf = int(rng.integers(1, 3))

    expected = _oracle(X, y, min_leaf)
    split = best_split(X, y, min_leaf=min_leaf)

    if expected is None:
        assert split is None
    else:
        assert (split.feature_index, split.threshold) == (expected[0], expected[1])
        assert split.criterion_gain == pytest.approx(expected[2])
