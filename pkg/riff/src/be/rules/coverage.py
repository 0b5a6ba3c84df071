"""
Rule coverage over datasets and single rows.
"""

from typing import Mapping, Sequence

import numpy as np

from riff.cli.utils.errors import SchemaError
from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.rules.models import Operator, Rule


def covers(rule: Rule, x: Mapping[str, float]) -> bool:
    """True iff every condition holds for the row ``x`` (feature name -> value)."""
    for condition in rule.conditions:
        if condition.feature not in x:
            raise SchemaError(f"Row has no feature '{condition.feature}'")
        if not condition.holds(float(x[condition.feature])):
            return False
    return True


def rule_mask(rule: Rule, ds: LabeledDataset) -> np.ndarray:
    """Boolean mask of the rows of ``ds`` covered by ``rule``."""
    mask = np.ones(ds.n_rows, dtype=bool)
    for condition in rule.conditions:
        column = ds.column(condition.feature)
        if condition.op is Operator.LE:
            mask &= column <= condition.threshold
        else:
            mask &= column > condition.threshold
    return mask


def rule_matrix(rules: Sequence[Rule], ds: LabeledDataset) -> np.ndarray:
    """(rules x rows) coverage matrix."""
    if not rules:
        return np.zeros((0, ds.n_rows), dtype=bool)
    return np.vstack([rule_mask(rule, ds) for rule in rules])


def coverage_mask(rules: Sequence[Rule], ds: LabeledDataset) -> np.ndarray:
    """Union of the rules' coverage; all False for an empty list."""
    return rule_matrix(rules, ds).any(axis=0)


def cov(rules: Sequence[Rule], ds: LabeledDataset) -> frozenset:
    """Row ids of ``ds`` covered by at least one rule."""
    return frozenset(int(rid) for rid in ds.row_ids[coverage_mask(rules, ds)])
