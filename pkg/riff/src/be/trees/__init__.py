"""
Best-first CART, tree-sum (FIGS) and tree-union (FIGU) growers under a
total split budget.
"""

from riff.src.be.trees.growers import figs_residual, figu_covered, grow_cart, grow_figs, grow_figu, grow_model
from riff.src.be.trees.model import ForestMode, ForestModel, ModelKind, TreeNode, predict, predict_scores
from riff.src.be.trees.split_search import Criterion, SplitCandidate, best_split

__all__ = [
    'figs_residual',
    'figu_covered',
    'grow_cart',
    'grow_figs',
    'grow_figu',
    'grow_model',
    'ForestMode',
    'ForestModel',
    'ModelKind',
    'TreeNode',
    'predict',
    'predict_scores',
    'Criterion',
    'SplitCandidate',
    'best_split',
]
