"""
Best-first growers for CART, FIGS and FIGU under a total-split budget.

All three share one loop: every iteration scores the best split of every
current leaf (and, for FIGS/FIGU, of a prospective new root over the whole
dataset), applies the single split with the highest weighted gain and repeats
until the budget is spent or no split has positive gain. The variants differ
only in the targets and rows each leaf is scored on:

- CART: labels, all routed rows.
- FIGS: residuals ``y - sum of the other trees' leaf values``.
- FIGU: labels, minus rows covered by a flagged leaf of another tree.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from riff.cli.utils.errors import ConfigurationError, ModelError
from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.trees.model import MODE_BY_KIND, ForestMode, ForestModel, ModelKind, TreeNode
from riff.src.be.trees.split_search import Criterion, SplitCandidate, best_split
from riff.src.config import DEFAULT_MIN_LEAF, DEFAULT_TAU, GAIN_EPSILON

logger = logging.getLogger(__name__)

_NO_SPLIT = "no-split"


# ------------------------------------------------------------
# ------------------ Residuals and coverage ------------------
# ------------------------------------------------------------

def _check_tree_index(trees: List[TreeNode], tree_index: int):
    if not 0 <= tree_index < len(trees):
        raise ModelError(f"Tree index {tree_index} out of range for a forest of {len(trees)} trees")


def figs_residual(forest: ForestModel, tree_index: int, x, y: int) -> float:
    """Residual of tree ``tree_index``: ``y`` minus the leaf values of every other tree."""
    if forest.mode is not ForestMode.SUM:
        raise ModelError(f"Residuals are defined for sum-mode forests, not '{forest.mode.value}'")
    _check_tree_index(forest.trees, tree_index)
    x = np.asarray(x, dtype=np.float64)
    others = sum(tree.leaf_for(x).value for j, tree in enumerate(forest.trees) if j != tree_index)
    return float(y - others)


def flagged_leaves(tree: TreeNode, tau: float) -> set:
    """
    Node ids of the leaves that flag a row: precision at least ``tau``, plus
    the tree's best leaf by precision (ties: larger total, then lower node id).
    """
    leaves = tree.leaves()
    best = min(leaves, key=lambda leaf: (-leaf.value, -leaf.total_count, leaf.node_id))
    return {leaf.node_id for leaf in leaves if leaf.value >= tau} | {best.node_id}


def figu_covered(forest: ForestModel, tree_index: int, x) -> bool:
    """True iff ``x`` lands in a flagged leaf of any tree other than ``tree_index``."""
    if forest.mode is not ForestMode.UNION:
        raise ModelError(f"Coverage is defined for union-mode forests, not '{forest.mode.value}'")
    _check_tree_index(forest.trees, tree_index)
    x = np.asarray(x, dtype=np.float64)
    tau = DEFAULT_TAU if forest.tau is None else forest.tau
    for j, tree in enumerate(forest.trees):
        if j != tree_index and tree.leaf_for(x).node_id in flagged_leaves(tree, tau):
            return True
    return False


def figu_covered_mask(trees: List[TreeNode], tau: float, X: np.ndarray, exclude: Optional[int] = None) -> np.ndarray:
    """Vectorized coverage over rows of ``X`` by every tree except ``exclude``."""
    covered = np.zeros(X.shape[0], dtype=bool)
    for j, tree in enumerate(trees):
        if j == exclude:
            continue
        covered |= np.isin(tree.assign(X), list(flagged_leaves(tree, tau)))
    return covered


# ------------------------------------------------------------
# ---------------------- Growth engine -----------------------
# ------------------------------------------------------------

class _ForestGrower:
    """Shared best-first loop; subclasses define the targets each leaf is scored on."""

    kind: ModelKind
    criterion: Criterion

    def __init__(self, ds: LabeledDataset, min_leaf: int, allow_new_trees: bool):
        if ds.n_rows == 0:
            raise ModelError("Cannot grow a tree on an empty dataset")
        if min_leaf < 1:
            raise ConfigurationError(f"min_leaf must be at least 1, got {min_leaf}")
        self.ds = ds
        self.X = ds.features
        self.y = ds.labels.astype(np.float64)
        self.min_leaf = min_leaf
        self.allow_new_trees = allow_new_trees

        self.trees: List[TreeNode] = []
        self.leaf_rows: List[Dict[int, np.ndarray]] = []
        self.leaf_nodes: List[Dict[int, TreeNode]] = []
        self.next_id: List[int] = []
        self.values: List[np.ndarray] = []
        self.cache: Dict[Tuple[int, int], Optional[SplitCandidate]] = {}
        self.root_cache: object = None

        if not allow_new_trees:
            self._add_root_leaf()

    # -- state --------------------------------------------------------------

    def _add_root_leaf(self) -> int:
        rows = np.arange(self.ds.n_rows)
        root = TreeNode(node_id=0, positive_count=self.ds.n_positive, total_count=self.ds.n_rows)
        self.trees.append(root)
        self.leaf_rows.append({0: rows})
        self.leaf_nodes.append({0: root})
        self.next_id.append(1)
        self.values.append(np.full(self.ds.n_rows, root.value))
        return len(self.trees) - 1

    def _targets(self, tree_index: Optional[int]) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """(targets over all rows, mask of rows kept) for a leaf of ``tree_index`` or a new root."""
        raise NotImplementedError

    # -- scoring ------------------------------------------------------------

    def _score(self, tree_index: Optional[int], rows: np.ndarray) -> Optional[SplitCandidate]:
        targets, keep = self._targets(tree_index)
        if keep is not None:
            rows = rows[keep[rows]]
        return best_split(self.X, targets, rows, self.criterion, self.min_leaf)

    def _leaf_candidate(self, tree_index: int, node_id: int) -> Optional[SplitCandidate]:
        key = (tree_index, node_id)
        if key not in self.cache:
            candidate = self._score(tree_index, self.leaf_rows[tree_index][node_id])
            self.cache[key] = None if candidate is None else candidate.at(key)
        return self.cache[key]

    def _root_candidate(self) -> Optional[SplitCandidate]:
        if self.root_cache is None:
            candidate = self._score(None, np.arange(self.ds.n_rows))
            self.root_cache = _NO_SPLIT if candidate is None else candidate
        return None if self.root_cache is _NO_SPLIT else self.root_cache

    def _choose(self) -> Optional[SplitCandidate]:
        """Highest weighted gain; ties keep the lower tree index, then node id, new root last."""
        best: Optional[SplitCandidate] = None
        candidates = [
            self._leaf_candidate(i, node_id)
            for i in range(len(self.trees))
            for node_id in sorted(self.leaf_rows[i])
        ]
        if self.allow_new_trees:
            candidates.append(self._root_candidate())
        for candidate in candidates:
            if candidate is None:
                continue
            if best is None or candidate.weighted_gain > best.weighted_gain + GAIN_EPSILON:
                best = candidate
        return best

    # -- mutation -----------------------------------------------------------

    def _apply(self, candidate: SplitCandidate):
        if candidate.leaf_reference is None:
            tree_index, node_id = self._add_root_leaf(), 0
        else:
            tree_index, node_id = candidate.leaf_reference

        node = self.leaf_nodes[tree_index].pop(node_id)
        rows = self.leaf_rows[tree_index].pop(node_id)
        goes_left = self.X[rows, candidate.feature_index] <= candidate.threshold

        children = []
        for side_rows in (rows[goes_left], rows[~goes_left]):
            child = TreeNode(
                node_id=self.next_id[tree_index],
                positive_count=int(self.y[side_rows].sum()),
                total_count=int(side_rows.size),
                depth=node.depth + 1,
            )
            self.next_id[tree_index] += 1
            self.leaf_nodes[tree_index][child.node_id] = child
            self.leaf_rows[tree_index][child.node_id] = side_rows
            self.values[tree_index][side_rows] = child.value
            children.append(child)

        node.feature_index = candidate.feature_index
        node.threshold = candidate.threshold
        node.gain = candidate.criterion_gain
        node.left, node.right = children

        self.cache.pop((tree_index, node_id), None)
        self._invalidate(tree_index)
        self.root_cache = None
        logger.debug(
            f"Split tree {tree_index} node {node_id} on '{self.ds.feature_names[candidate.feature_index]}' "
            f"<= {candidate.threshold!r} (gain {candidate.criterion_gain:.6g}, n={candidate.n_samples})"
        )

    def _invalidate(self, changed_tree: int):
        """Drop cached candidates whose targets depend on ``changed_tree``."""
        self.cache = {key: value for key, value in self.cache.items() if key[0] == changed_tree}

    # -- driver -------------------------------------------------------------

    def grow(self, max_splits: int, tau: Optional[float] = None) -> ForestModel:
        if max_splits < 1:
            raise ConfigurationError(f"max_splits must be at least 1, got {max_splits}")
        splits = 0
        while splits < max_splits:
            candidate = self._choose()
            if candidate is None:
                logger.debug(f"No positive-gain split left after {splits} splits")
                break
            self._apply(candidate)
            splits += 1

        if not self.trees:
            self._add_root_leaf()

        model = ForestModel(
            trees=self.trees,
            mode=MODE_BY_KIND[self.kind],
            kind=self.kind,
            feature_names=list(self.ds.feature_names),
            tau=tau,
            criterion=self.criterion.value,
            min_leaf=self.min_leaf,
            max_splits=max_splits,
            metadata={"training_rows": self.ds.n_rows, "training_digest": self.ds.digest()},
        )
        logger.info(
            f"Grew {self.kind.value} model: {model.n_trees} tree(s), {model.total_splits} split(s) "
            f"of {max_splits} on {self.ds.n_rows} rows"
        )
        return model


class _CartGrower(_ForestGrower):
    kind = ModelKind.CART

    def __init__(self, ds: LabeledDataset, min_leaf: int, criterion: Criterion):
        super().__init__(ds, min_leaf, allow_new_trees=False)
        self.criterion = criterion

    def _targets(self, tree_index):
        return self.y, None


class _FigsGrower(_ForestGrower):
    kind = ModelKind.FIGS
    criterion = Criterion.MSE

    def _targets(self, tree_index):
        others = np.zeros(self.ds.n_rows)
        for j, values in enumerate(self.values):
            if j != tree_index:
                others += values
        return self.y - others, None


class _FiguGrower(_ForestGrower):
    kind = ModelKind.FIGU
    criterion = Criterion.GINI

    def __init__(self, ds: LabeledDataset, min_leaf: int, tau: float, allow_new_trees: bool):
        if not 0.0 <= tau <= 1.0:
            raise ConfigurationError(f"tau must be in [0, 1], got {tau}")
        super().__init__(ds, min_leaf, allow_new_trees)
        self.tau = tau

    def _targets(self, tree_index):
        covered = figu_covered_mask(self.trees, self.tau, self.X, exclude=tree_index)
        return self.y, ~covered


# ------------------------------------------------------------
# ------------------------ Public API ------------------------
# ------------------------------------------------------------

def grow_cart(
    ds: LabeledDataset,
    max_splits: int,
    min_leaf: int = DEFAULT_MIN_LEAF,
    criterion: Criterion = Criterion.GINI,
) -> ForestModel:
    """Single tree grown best-first: the leaf with the highest weighted gain splits next."""
    return _CartGrower(ds, min_leaf, Criterion(criterion)).grow(max_splits)


def grow_figs(
    ds: LabeledDataset,
    max_splits: int,
    min_leaf: int = DEFAULT_MIN_LEAF,
    allow_new_trees: bool = True,
) -> ForestModel:
    """
    Tree sum grown on residuals; each iteration may split a leaf or start a new tree.

    With ``allow_new_trees=False`` the model stays a single tree grown on the
    labels with the mse criterion.
    """
    return _FigsGrower(ds, min_leaf, allow_new_trees).grow(max_splits)


def grow_figu(
    ds: LabeledDataset,
    max_splits: int,
    min_leaf: int = DEFAULT_MIN_LEAF,
    tau: float = DEFAULT_TAU,
    allow_new_trees: bool = True,
) -> ForestModel:
    """
    Tree union: leaves of tree i are scored with gini on the rows no other
    tree already flags (a leaf flags when its precision is at least ``tau``
    or it is that tree's best leaf). Coverage is recomputed after every split.
    """
    return _FiguGrower(ds, min_leaf, tau, allow_new_trees).grow(max_splits, tau=tau)


def grow_model(
    kind: ModelKind,
    ds: LabeledDataset,
    max_splits: int,
    min_leaf: int = DEFAULT_MIN_LEAF,
    tau: float = DEFAULT_TAU,
) -> ForestModel:
    """Dispatch on model kind."""
    kind = ModelKind(kind)
    if kind is ModelKind.CART:
        return grow_cart(ds, max_splits, min_leaf)
    if kind is ModelKind.FIGS:
        return grow_figs(ds, max_splits, min_leaf)
    return grow_figu(ds, max_splits, min_leaf, tau)
