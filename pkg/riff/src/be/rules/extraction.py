"""
Rule extraction from tree leaves and condition simplification.
"""

import logging
from typing import Dict, List, Optional

from riff.src.be.rules.models import CandidateRuleSet, Condition, Operator, Rule, RuleProvenance, TrainStats
from riff.src.be.trees.model import ForestModel, TreeNode

logger = logging.getLogger(__name__)


def simplify(rule: Rule) -> Rule:
    """
    Collapse conditions to at most one ``<=`` and one ``>`` per feature.

    ``<=`` keeps the smallest threshold, ``>`` the largest; conditions are
    ordered by feature name with ``>`` first. A feature whose ``>`` bound is
    not below its ``<=`` bound marks the rule unsatisfiable.
    """
    upper: Dict[str, float] = {}
    lower: Dict[str, float] = {}
    for condition in rule.conditions:
        if condition.op is Operator.LE:
            upper[condition.feature] = min(upper.get(condition.feature, condition.threshold), condition.threshold)
        else:
            lower[condition.feature] = max(lower.get(condition.feature, condition.threshold), condition.threshold)

    conditions = [Condition(feature=f, op=Operator.LE, threshold=t) for f, t in upper.items()]
    conditions += [Condition(feature=f, op=Operator.GT, threshold=t) for f, t in lower.items()]
    conditions.sort(key=Condition.sort_key)

    satisfiable = all(lower[f] < upper[f] for f in lower.keys() & upper.keys())
    return rule.model_copy(update={"conditions": tuple(conditions), "satisfiable": satisfiable})


def _leaf_paths(root: TreeNode, feature_names: List[str]):
    """Yield (leaf, path conditions) in left-first depth-first order."""
    stack = [(root, ())]
    while stack:
        node, path = stack.pop()
        if node.is_leaf:
            yield node, path
            continue
        name = feature_names[node.feature_index]
        stack.append((node.right, path + (Condition(feature=name, op=Operator.GT, threshold=node.threshold),)))
        stack.append((node.left, path + (Condition(feature=name, op=Operator.LE, threshold=node.threshold),)))


def extract_rules(model: ForestModel, min_precision: Optional[float] = None) -> CandidateRuleSet:
    """
    One simplified rule per leaf of every tree.

    Args:
        model: Trained forest
        min_precision: When set, leaves whose training precision is below it
            are skipped

    Returns:
        CandidateRuleSet ordered by tree, then leaf position (left first)
    """
    rules: List[Rule] = []
    skipped = 0
    for tree_index, root in enumerate(model.trees):
        for leaf, path in _leaf_paths(root, model.feature_names):
            if min_precision is not None and leaf.value < min_precision:
                skipped += 1
                continue
            rule = Rule(
                conditions=path,
                provenance=RuleProvenance(model_kind=model.kind.value, tree_index=tree_index, leaf_id=leaf.node_id),
                train_stats=TrainStats(positive_count=leaf.positive_count, total_count=leaf.total_count),
            )
            rules.append(simplify(rule))

    if skipped:
        logger.info(f"Skipped {skipped} leaves with precision below {min_precision:.4f}")
    logger.debug(f"Extracted {len(rules)} candidate rules from {model.n_trees} tree(s)")
    return CandidateRuleSet(rules=rules, source_model_digest=model.digest())
