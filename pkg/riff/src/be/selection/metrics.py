"""
Rule-set rates on a labeled dataset.
"""

from typing import Sequence

import numpy as np

from riff.cli.utils.errors import MetricError
from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.rules.coverage import coverage_mask, rule_mask
from riff.src.be.rules.models import Rule
from riff.src.be.selection.models import BudgetMetric


def mask_tpr(mask: np.ndarray, ds: LabeledDataset) -> float:
    if ds.n_positive == 0:
        raise MetricError("True-positive rate is undefined without positive rows")
    return float((mask & ds.positive_mask).sum()) / ds.n_positive


def mask_fpr(mask: np.ndarray, ds: LabeledDataset) -> float:
    if ds.n_negative == 0:
        raise MetricError("False-positive rate is undefined without negative rows")
    return float((mask & ~ds.positive_mask).sum()) / ds.n_negative


def mask_alert_rate(mask: np.ndarray, ds: LabeledDataset) -> float:
    if ds.n_rows == 0:
        raise MetricError("Alert rate is undefined on an empty dataset")
    return float(mask.sum()) / ds.n_rows


def mask_budget_value(mask: np.ndarray, ds: LabeledDataset, metric: BudgetMetric) -> float:
    if BudgetMetric(metric) is BudgetMetric.FPR:
        return mask_fpr(mask, ds)
    return mask_alert_rate(mask, ds)


def tpr(rules: Sequence[Rule], ds: LabeledDataset) -> float:
    """Fraction of positive rows covered by the union of ``rules``."""
    return mask_tpr(coverage_mask(rules, ds), ds)


def fpr(rules: Sequence[Rule], ds: LabeledDataset) -> float:
    """Fraction of negative rows covered by the union of ``rules``."""
    return mask_fpr(coverage_mask(rules, ds), ds)


def alert_rate(rules: Sequence[Rule], ds: LabeledDataset) -> float:
    """Fraction of all rows covered by the union of ``rules``."""
    return mask_alert_rate(coverage_mask(rules, ds), ds)


def rule_precision(rule: Rule, ds: LabeledDataset) -> float:
    """Positive share of the rows ``rule`` covers; 0 when it covers nothing."""
    mask = rule_mask(rule, ds)
    covered = int(mask.sum())
    if covered == 0:
        return 0.0
    return float((mask & ds.positive_mask).sum()) / covered
