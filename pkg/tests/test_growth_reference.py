"""
Step-by-step check of the FIGS and FIGU growers against a plain-Python
reference grower.

The reference recomputes everything from scratch at every step: FIGS residuals
from the other trees' leaf values, FIGU discard masks from the other trees'
flagged leaves, and an exhaustive split search over every leaf and a new root.
Growing with budgets 1..K must reproduce the reference forest after 1..K steps.
"""

import numpy as np
import pytest

from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.trees.growers import grow_figs, grow_figu

EPS = 1e-12
MAX_STEPS = 6


class _Node:
    def __init__(self, node_id, rows):
        self.node_id = node_id
        self.rows = rows
        self.feature = None
        self.threshold = None
        self.gain = None
        self.left = None
        self.right = None

    def leaves(self):
        if self.feature is None:
            return [self]
        return self.left.leaves() + self.right.leaves()

    def preorder(self):
        yield self
        if self.feature is not None:
            yield from self.left.preorder()
            yield from self.right.preorder()


class _ReferenceGrower:
    def __init__(self, X, y, kind, min_leaf, tau):
        self.X, self.y = X, y.astype(float)
        self.kind, self.min_leaf, self.tau = kind, min_leaf, tau
        self.trees = []
        self.next_id = []

    # per-row helpers, no vectorization

    def _leaf_of(self, tree, i):
        node = tree
        while node.feature is not None:
            node = node.left if self.X[i, node.feature] <= node.threshold else node.right
        return node

    def _value(self, node):
        return float(self.y[node.rows].mean())

    def _tree_values(self, tree):
        return np.array([self._value(self._leaf_of(tree, i)) for i in range(len(self.y))])

    def _flagged(self, tree):
        leaves = tree.leaves()
        best = min(leaves, key=lambda leaf: (-self._value(leaf), -len(leaf.rows), leaf.node_id))
        return {leaf.node_id for leaf in leaves if self._value(leaf) >= self.tau} | {best.node_id}

    def _covered(self, exclude):
        covered = np.zeros(len(self.y), dtype=bool)
        for j, tree in enumerate(self.trees):
            if j == exclude:
                continue
            flagged = self._flagged(tree)
            for i in range(len(self.y)):
                covered[i] |= self._leaf_of(tree, i).node_id in flagged
        return covered

    # targets and the rows a leaf (or a new root when tree_index is None) is scored on

    def _problem(self, tree_index, rows):
        if self.kind == "figs":
            others = sum(
                (self._tree_values(tree) for j, tree in enumerate(self.trees) if j != tree_index),
                np.zeros(len(self.y)),
            )
            return self.y - others, rows
        covered = self._covered(tree_index)
        return self.y, np.array([i for i in rows if not covered[i]], dtype=np.int64)

    def _impurity(self, t):
        if self.kind == "figu":
            p = t.mean()
            return 2.0 * p * (1.0 - p)
        return float(np.mean((t - t.mean()) ** 2))

    def _search(self, targets, rows):
        n = len(rows)
        if n < 2 or n < 2 * self.min_leaf:
            return None
        parent = self._impurity(targets[rows])
        if parent <= EPS:
            return None
        best = None
        for feature in range(self.X.shape[1]):
            values = sorted(set(self.X[rows, feature].tolist()))
            for low, high in zip(values, values[1:]):
                threshold = (low + high) / 2.0
                left = rows[self.X[rows, feature] <= threshold]
                right = rows[self.X[rows, feature] > threshold]
                if len(left) < self.min_leaf or len(right) < self.min_leaf:
                    continue
                children = (
                    len(left) * self._impurity(targets[left]) + len(right) * self._impurity(targets[right])
                ) / n
                gain = parent - children
                if gain > EPS and (best is None or gain > best[2] + EPS):
                    best = (feature, threshold, gain, n)
        return best

    def step(self) -> bool:
        options = []
        for t, tree in enumerate(self.trees):
            for leaf in sorted(tree.leaves(), key=lambda node: node.node_id):
                targets, rows = self._problem(t, leaf.rows)
                options.append(((t, leaf), self._search(targets, rows)))
        targets, rows = self._problem(None, np.arange(len(self.y)))
        options.append((None, self._search(targets, rows)))

        chosen = None
        for where, split in options:
            if split is None:
                continue
            if chosen is None or split[2] * split[3] > chosen[1][2] * chosen[1][3] + EPS:
                chosen = (where, split)
        if chosen is None:
            return False

        where, (feature, threshold, gain, _) = chosen
        if where is None:
            self.trees.append(_Node(0, np.arange(len(self.y))))
            self.next_id.append(1)
            t, node = len(self.trees) - 1, self.trees[-1]
        else:
            t, node = where
        goes_left = self.X[node.rows, feature] <= threshold
        node.feature, node.threshold, node.gain = feature, threshold, gain
        node.left = _Node(self.next_id[t], node.rows[goes_left])
        node.right = _Node(self.next_id[t] + 1, node.rows[~goes_left])
        self.next_id[t] += 2
        return True

    def forest(self):
        trees = self.trees or [_Node(0, np.arange(len(self.y)))]
        return [
            [
                (node.node_id, node.feature, node.threshold, int(self.y[node.rows].sum()), len(node.rows))
                for node in tree.preorder()
            ]
            for tree in trees
        ]

    def gains(self):
        return [[node.gain for node in tree.preorder() if node.feature is not None] for tree in self.trees]


def _structure(model):
    return [
        [
            (node.node_id, node.feature_index, node.threshold, node.positive_count, node.total_count)
            for node in tree.iter_nodes()
        ]
        for tree in model.trees
    ]


def _gains(model):
    return [[node.gain for node in tree.iter_nodes() if not node.is_leaf] for tree in model.trees]


def _case(seed: int):
    rng = np.random.default_rng(seed)
    n_rows = int(rng.integers(30, 70))
    X = np.round(rng.uniform(0, 1, size=(n_rows, 3)), 2)
    signal = (X[:, 0] > 0.6) | ((X[:, 1] < 0.3) & (X[:, 2] > 0.5))
    y = np.where(rng.random(n_rows) < 0.85, signal, ~signal).astype(int)
    y[0], y[1] = 1, 0
    ds = LabeledDataset(features=X, labels=y, feature_names=("a", "b", "c"))
    min_leaf = int(rng.integers(1, 4))
    tau = float(rng.choice([0.3, 0.5, 0.7]))
    return ds, min_leaf, tau


def _grow(kind, ds, budget, min_leaf, tau):
    if kind == "figs":
        return grow_figs(ds, max_splits=budget, min_leaf=min_leaf)
    return grow_figu(ds, max_splits=budget, min_leaf=min_leaf, tau=tau)


@pytest.mark.parametrize("kind", ["figs", "figu"])
@pytest.mark.parametrize("seed", range(30))
def test_growth_matches_reference_at_every_step(kind, seed):
    ds, min_leaf, tau = _case(seed)
    reference = _ReferenceGrower(ds.features, ds.labels, kind, min_leaf, tau)

    for budget in range(1, MAX_STEPS + 1):
        progressed = reference.step()
        model = _grow(kind, ds, budget, min_leaf, tau)

        assert _structure(model) == reference.forest(), f"budget {budget}"
        for got, expected in zip(_gains(model), reference.gains()):
            assert got == pytest.approx(expected, abs=1e-9)
        if not progressed:
            break


@pytest.mark.parametrize("kind", ["figs", "figu"])
def test_reference_cases_include_multi_tree_forests(kind):
    multi_tree = 0
    for seed in range(30):
        ds, min_leaf, tau = _case(seed)
        multi_tree += _grow(kind, ds, MAX_STEPS, min_leaf, tau).n_trees >= 2

    assert multi_tree >= 3
