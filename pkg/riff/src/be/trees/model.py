"""
Binary decision trees with leaf statistics, and forests of them.

A node routes a row to its left child iff ``x[feature_index] <= threshold``.
Leaves keep the positive and total counts of the training rows routed to them;
a leaf's value is its positive rate.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence

import numpy as np

from riff.cli.utils.errors import DataError, FileSystemError, ModelError, SchemaError
from riff.src.config import FORMAT_VERSION, MODEL_FORMAT
from riff.src.utils import file_manager


class ModelKind(str, Enum):
    CART = "cart"
    FIGS = "figs"
    FIGU = "figu"


class ForestMode(str, Enum):
    """How per-tree leaf values combine into a score."""
    SINGLE = "single"
    SUM = "sum"
    UNION = "union"


MODE_BY_KIND = {
    ModelKind.CART: ForestMode.SINGLE,
    ModelKind.FIGS: ForestMode.SUM,
    ModelKind.FIGU: ForestMode.UNION,
}


@dataclass
class TreeNode:
    """Leaf when ``feature_index`` is None, internal node otherwise."""
    node_id: int
    positive_count: int
    total_count: int
    depth: int = 0
    feature_index: Optional[int] = None
    threshold: Optional[float] = None
    gain: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature_index is None

    @property
    def value(self) -> float:
        return self.positive_count / self.total_count if self.total_count else 0.0

    def iter_nodes(self) -> Iterator["TreeNode"]:
        """Pre-order traversal, left subtree first."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)

    def leaves(self) -> List["TreeNode"]:
        return [node for node in self.iter_nodes() if node.is_leaf]

    def internal_count(self) -> int:
        return sum(1 for node in self.iter_nodes() if not node.is_leaf)

    def leaf_for(self, x: np.ndarray) -> "TreeNode":
        node = self
        while not node.is_leaf:
            node = node.left if x[node.feature_index] <= node.threshold else node.right
        return node

    def assign(self, X: np.ndarray) -> np.ndarray:
        """Leaf node id reached by each row of ``X``."""
        assignment = np.empty(X.shape[0], dtype=np.int64)
        stack = [(self, np.arange(X.shape[0]))]
        while stack:
            node, rows = stack.pop()
            if node.is_leaf:
                assignment[rows] = node.node_id
                continue
            goes_left = X[rows, node.feature_index] <= node.threshold
            stack.append((node.left, rows[goes_left]))
            stack.append((node.right, rows[~goes_left]))
        return assignment

    def leaf_values(self, X: np.ndarray) -> np.ndarray:
        """Positive rate of the leaf reached by each row of ``X``."""
        values = np.empty(X.shape[0], dtype=np.float64)
        assignment = self.assign(X)
        for leaf in self.leaves():
            values[assignment == leaf.node_id] = leaf.value
        return values

    def to_dict(self, feature_names: Sequence[str]) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "id": self.node_id,
            "positive_count": self.positive_count,
            "total_count": self.total_count,
            "value": self.value,
        }
        if not self.is_leaf:
            data.update({
                "feature": feature_names[self.feature_index],
                "threshold": self.threshold,
                "gain": self.gain,
                "left": self.left.to_dict(feature_names),
                "right": self.right.to_dict(feature_names),
            })
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], feature_names: Sequence[str], depth: int = 0) -> "TreeNode":
        node = cls(
            node_id=int(data["id"]),
            positive_count=int(data["positive_count"]),
            total_count=int(data["total_count"]),
            depth=depth,
        )
        if "feature" in data:
            try:
                node.feature_index = list(feature_names).index(data["feature"])
            except ValueError:
                raise SchemaError(f"Model references unknown feature '{data['feature']}'")
            node.threshold = float(data["threshold"])
            node.gain = None if data.get("gain") is None else float(data["gain"])
            node.left = cls.from_dict(data["left"], feature_names, depth + 1)
            node.right = cls.from_dict(data["right"], feature_names, depth + 1)
        return node


@dataclass
class ForestModel:
    """
    Ordered list of trees plus the combination mode.

    ``single`` holds exactly one tree; ``sum`` adds leaf values (FIGS);
    ``union`` takes the maximum leaf value, flagging a row when any tree does (FIGU).
    """
    trees: List[TreeNode]
    mode: ForestMode
    kind: ModelKind
    feature_names: List[str]
    tau: Optional[float] = None
    criterion: str = "gini"
    min_leaf: int = 1
    max_splits: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def total_splits(self) -> int:
        return sum(tree.internal_count() for tree in self.trees)

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def validate(self):
        if not self.trees:
            raise ModelError("A forest needs at least one tree")
        if self.mode is ForestMode.SINGLE and len(self.trees) != 1:
            raise ModelError(f"Single-tree mode with {len(self.trees)} trees")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": MODEL_FORMAT,
            "version": FORMAT_VERSION,
            "kind": self.kind.value,
            "mode": self.mode.value,
            "tau": self.tau,
            "criterion": self.criterion,
            "min_leaf": self.min_leaf,
            "max_splits": self.max_splits,
            "total_splits": self.total_splits,
            "feature_names": list(self.feature_names),
            "metadata": dict(self.metadata),
            "trees": [tree.to_dict(self.feature_names) for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ForestModel":
        if data.get("format") != MODEL_FORMAT:
            raise SchemaError(f"Not a model document (format={data.get('format')!r})")
        if data.get("version") != FORMAT_VERSION:
            raise SchemaError(f"Unsupported model format version {data.get('version')!r}")
        feature_names = list(data["feature_names"])
        model = cls(
            trees=[TreeNode.from_dict(tree, feature_names) for tree in data["trees"]],
            mode=ForestMode(data["mode"]),
            kind=ModelKind(data["kind"]),
            feature_names=feature_names,
            tau=data.get("tau"),
            criterion=data.get("criterion", "gini"),
            min_leaf=int(data.get("min_leaf", 1)),
            max_splits=data.get("max_splits"),
            metadata=dict(data.get("metadata", {})),
        )
        model.validate()
        return model

    def digest(self) -> str:
        return file_manager.digest(self.to_dict())


def _row_vector(forest: ForestModel, x) -> np.ndarray:
    if isinstance(x, dict):
        try:
            return np.array([float(x[name]) for name in forest.feature_names])
        except KeyError as e:
            raise SchemaError(f"Row lacks feature '{e.args[0]}'")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (len(forest.feature_names),):
        raise DataError(f"Row has {x.shape} values, model expects {len(forest.feature_names)}")
    return x


def predict(forest: ForestModel, x) -> float:
    """
    Score of one row (array in model column order, or a name -> value mapping).

    single/union: leaf value (union takes the maximum over trees); sum: sum of leaf values.
    """
    x = _row_vector(forest, x)
    values = [tree.leaf_for(x).value for tree in forest.trees]
    if forest.mode is ForestMode.SUM:
        return float(sum(values))
    return float(max(values))


def predict_scores(forest: ForestModel, X: np.ndarray) -> np.ndarray:
    """Vectorized ``predict`` over the rows of ``X``."""
    X = np.asarray(X, dtype=np.float64)
    per_tree = np.vstack([tree.leaf_values(X) for tree in forest.trees])
    if forest.mode is ForestMode.SUM:
        return per_tree.sum(axis=0)
    return per_tree.max(axis=0)


def align_features(forest: ForestModel, feature_names: Sequence[str]) -> np.ndarray:
    """Column positions in a dataset for each model feature (SchemaError when absent)."""
    lookup = {name: i for i, name in enumerate(feature_names)}
    missing = [name for name in forest.feature_names if name not in lookup]
    if missing:
        raise SchemaError(f"Dataset lacks model features: {', '.join(missing)}")
    return np.array([lookup[name] for name in forest.feature_names], dtype=np.int64)


def save_model(path, forest: ForestModel):
    """Write ``forest`` as a canonical JSON model document."""
    file_manager.ensure_directory(str(Path(path).parent))
    file_manager.save_json(forest.to_dict(), str(path))
    return Path(path)


def load_model(path) -> ForestModel:
    path = Path(path).expanduser()
    if not path.is_file():
        raise FileSystemError(f"Model file not found: {path}")
    try:
        document = file_manager.load_json(str(path))
    except ValueError as e:
        raise SchemaError(f"{path.name} is not valid JSON: {e}")
    try:
        return ForestModel.from_dict(document)
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"{path.name}: malformed model document ({e})")
