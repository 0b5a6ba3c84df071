"""
Recall at a rate budget for score models and rule sets.

Score models are thresholded on their distinct score values (tied rows flip
together) and recall is linearly interpolated between the two operating
points around the target, which matches the expectation semantics of a
randomized rule set.
"""

import logging
from typing import Optional

import numpy as np
from sklearn.metrics import roc_curve

from riff.cli.utils.errors import DataError, MetricError
from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.evaluation.models import MetricsReport, ReportSource
from riff.src.be.rules.coverage import rule_matrix
from riff.src.be.selection.metrics import mask_budget_value, mask_tpr
from riff.src.be.selection.models import BudgetConstraint, BudgetMetric, SelectionResult
from riff.src.be.trees.model import ForestModel, align_features, predict_scores

logger = logging.getLogger(__name__)


def _operating_points(scores, labels):
    """(fpr, tpr, alert rate) at every distinct score threshold, starting from (0, 0, 0)."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise DataError(f"Scores {scores.shape} and labels {labels.shape} must be aligned vectors")
    if not np.isfinite(scores).all():
        raise DataError("Scores must be finite")
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise MetricError(f"Recall at a budget needs both classes (got {n_pos} positive, {n_neg} negative)")
    fpr, tpr, _ = roc_curve(labels, scores, drop_intermediate=False)
    alert = (fpr * n_neg + tpr * n_pos) / (n_pos + n_neg)
    return fpr, tpr, alert


def _interpolate(xs: np.ndarray, ys: np.ndarray, target: float) -> float:
    """Recall at ``target`` on a non-decreasing curve; exact hits take the highest point."""
    if not 0.0 <= target <= 1.0:
        raise DataError(f"Budget target must be in [0, 1], got {target}")
    k = int(np.searchsorted(xs, target, side="right")) - 1
    if xs[k] == target or k == xs.size - 1:
        return float(ys[k])
    weight = (target - xs[k]) / (xs[k + 1] - xs[k])
    return float(ys[k] + weight * (ys[k + 1] - ys[k]))


def recall_at_fpr(scores, labels, fpr_target: float) -> float:
    """Interpolated recall at a false-positive rate of ``fpr_target``."""
    fpr, tpr, _ = _operating_points(scores, labels)
    return _interpolate(fpr, tpr, fpr_target)


def recall_at_alert_rate(scores, labels, alert_target: float) -> float:
    """Interpolated recall at an alert rate of ``alert_target``."""
    _, tpr, alert = _operating_points(scores, labels)
    return _interpolate(alert, tpr, alert_target)


def recall_at_budget(scores, labels, budget: BudgetConstraint) -> float:
    if budget.metric is BudgetMetric.FPR:
        return recall_at_fpr(scores, labels, budget.max_value)
    return recall_at_alert_rate(scores, labels, budget.max_value)


def _fraction(value: float) -> float:
    return min(1.0, max(0.0, float(value)))


def evaluate_ruleset(
    result: SelectionResult,
    ds: LabeledDataset,
    budget: Optional[BudgetConstraint] = None,
    split_name: str = "evaluation",
    seed: Optional[int] = None,
    model_kind: Optional[str] = None,
    max_splits: Optional[int] = None,
    source: ReportSource = ReportSource.RULESET,
) -> MetricsReport:
    """
    Expected recall and budget metric of a selected rule set on ``ds``.

    The last rule contributes with its firing probability; rule_count counts
    it as a whole rule.
    """
    budget = budget or result.budget
    p = result.last_rule_probability
    masks = rule_matrix(result.ordered_rules, ds)
    committed = masks[:-1].any(axis=0) if result.ordered_rules else np.zeros(ds.n_rows, dtype=bool)
    full = masks.any(axis=0)

    recall = (1.0 - p) * mask_tpr(committed, ds) + p * mask_tpr(full, ds)
    budget_value = (
        (1.0 - p) * mask_budget_value(committed, ds, budget.metric)
        + p * mask_budget_value(full, ds, budget.metric)
    )
    certain = full if p >= 1.0 else committed

    report = MetricsReport(
        recall_at_budget=_fraction(recall),
        budget_metric_value=_fraction(budget_value),
        budget_metric=budget.metric,
        budget_max=budget.max_value,
        rule_count=result.rule_count,
        conservative_recall=_fraction(mask_tpr(certain, ds)),
        last_rule_probability=p,
        expected=0.0 < p < 1.0,
        split_name=split_name,
        seed=seed,
        model_kind=model_kind,
        source=source,
        max_splits=max_splits,
    )
    logger.debug(
        f"Rule set on {split_name}: recall {report.recall_at_budget:.4f}, "
        f"{budget.metric.value} {report.budget_metric_value:.6g}, {report.rule_count} rules"
    )
    return report


def evaluate_scores(
    scores: np.ndarray,
    ds: LabeledDataset,
    budget: BudgetConstraint,
    split_name: str = "evaluation",
    seed: Optional[int] = None,
    model_kind: Optional[str] = None,
    max_splits: Optional[int] = None,
    source: ReportSource = ReportSource.EXTERNAL_SCORES,
) -> MetricsReport:
    """Recall at the budget for per-row scores aligned with ``ds``."""
    recall = recall_at_budget(scores, ds.labels, budget)
    return MetricsReport(
        recall_at_budget=_fraction(recall),
        budget_metric_value=budget.max_value,
        budget_metric=budget.metric,
        budget_max=budget.max_value,
        expected=True,
        split_name=split_name,
        seed=seed,
        model_kind=model_kind,
        source=source,
        max_splits=max_splits,
    )


def evaluate_model(
    forest: ForestModel,
    ds: LabeledDataset,
    budget: BudgetConstraint,
    split_name: str = "evaluation",
    seed: Optional[int] = None,
) -> MetricsReport:
    """Recall at the budget of the raw tree model's scores."""
    X = ds.features[:, align_features(forest, ds.feature_names)]
    return evaluate_scores(
        predict_scores(forest, X),
        ds,
        budget,
        split_name=split_name,
        seed=seed,
        model_kind=forest.kind.value,
        max_splits=forest.max_splits,
        source=ReportSource.MODEL,
    )
