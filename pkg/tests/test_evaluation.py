"""
Tests for recall at a budget and per-seed aggregation.
"""

import numpy as np
import pytest

from riff.cli.utils.errors import DataError, MetricError
from riff.src.be.evaluation.metrics import (
    evaluate_model,
    evaluate_ruleset,
    recall_at_alert_rate,
    recall_at_fpr,
)
from riff.src.be.evaluation.models import MetricsReport, ReportSource
from riff.src.be.evaluation.report import aggregate_runs, format_aggregate
from riff.src.be.rules.extraction import extract_rules
from riff.src.be.selection.greedy import greedy_select
from riff.src.be.selection.metrics import alert_rate, fpr, tpr
from riff.src.be.selection.models import BudgetConstraint, BudgetMetric
from riff.src.be.trees.growers import grow_cart
from tests.conftest import make_random_dataset


def _report(recall: float, model_kind: str = "cart", source: ReportSource = ReportSource.RULESET, **extra):
    return MetricsReport(
        recall_at_budget=recall,
        budget_metric_value=0.01,
        budget_metric=BudgetMetric.FPR,
        budget_max=0.01,
        split_name="test",
        model_kind=model_kind,
        source=source,
        **extra,
    )


# ------------------------------------------------------------
# --------------------- Recall at budget ---------------------
# ------------------------------------------------------------

def test_recall_at_fpr_on_exact_operating_point():
    assert recall_at_fpr([0.9, 0.8, 0.7, 0.6], [1, 1, 0, 0], 0.5) == pytest.approx(1.0)


def test_recall_at_fpr_zero_keeps_only_clean_thresholds():
    assert recall_at_fpr([0.9, 0.8, 0.7, 0.6], [1, 1, 0, 0], 0.0) == pytest.approx(1.0)
    assert recall_at_fpr([0.9, 0.8, 0.7, 0.6], [1, 0, 1, 0], 0.0) == pytest.approx(0.5)


def test_identical_scores_interpolate_along_the_diagonal():
    scores = np.full(10, 0.4)
    labels = np.array([1] * 4 + [0] * 6)

    assert recall_at_fpr(scores, labels, 0.3) == pytest.approx(0.3)


def test_interpolation_between_operating_points():
    # thresholds: 0.9 -> (fpr 0, tpr 0.5), 0.8 -> (0.5, 0.5), 0.7 -> (0.5, 1.0)
    scores = [0.9, 0.8, 0.7, 0.6]
    labels = [1, 0, 1, 0]

    assert recall_at_fpr(scores, labels, 0.25) == pytest.approx(0.5)
    assert recall_at_fpr(scores, labels, 0.75) == pytest.approx(1.0)


def test_recall_at_alert_rate():
    scores = [0.9, 0.8, 0.7, 0.6]
    labels = [1, 1, 0, 0]

    assert recall_at_alert_rate(scores, labels, 0.25) == pytest.approx(0.5)
    assert recall_at_alert_rate(scores, labels, 0.5) == pytest.approx(1.0)


def test_recall_needs_both_classes():
    with pytest.raises(MetricError):
        recall_at_fpr([0.1, 0.2], [1, 1], 0.1)


def test_scores_and_labels_must_align():
    with pytest.raises(DataError):
        recall_at_fpr([0.1, 0.2, 0.3], [1, 0], 0.1)


@pytest.mark.parametrize("seed", range(20))
def test_recall_at_fpr_is_monotone_and_reaches_one(seed):
    rng = np.random.default_rng(seed)
    n_rows = int(rng.integers(5, 120))
    scores = np.round(rng.random(n_rows), 1)
    labels = (rng.random(n_rows) < 0.3).astype(int)
    labels[0], labels[1] = 1, 0
    targets = np.linspace(0.0, 1.0, 41)

    recalls = [recall_at_fpr(scores, labels, t) for t in targets]

    assert all(later >= earlier - 1e-12 for earlier, later in zip(recalls, recalls[1:]))
    assert recall_at_fpr(scores, labels, 1.0) == pytest.approx(1.0)
    assert recall_at_alert_rate(scores, labels, 1.0) == pytest.approx(1.0)


# ------------------------------------------------------------
# ------------------------ Rule sets -------------------------
# ------------------------------------------------------------

def test_ruleset_report_of_worked_example(ten_row_selection):
    ds, candidates = ten_row_selection
    budget = BudgetConstraint.build("fpr", 0.2)
    result = greedy_select(candidates, ds, budget)

    report = evaluate_ruleset(result, ds, split_name="selection")

    assert report.recall_at_budget == pytest.approx(0.8)
    assert report.budget_metric_value == pytest.approx(0.2)
    assert report.conservative_recall == pytest.approx(0.75)
    assert report.rule_count == 3
    assert report.expected
    assert report.configuration == "RULES+RIFF"


def test_ruleset_without_rules_has_zero_recall(ten_row_selection):
    ds, candidates = ten_row_selection
    result = greedy_select(candidates, ds, BudgetConstraint.build("fpr", 0.2))
    empty = result.model_copy(update={"ordered_rules": [], "step_trace": [], "candidate_indices": []})

    report = evaluate_ruleset(empty, ds)

    assert report.recall_at_budget == 0.0
    assert report.rule_count == 0


@pytest.mark.parametrize("metric,limit", [("fpr", 0.2), ("fpr", 0.1), ("alert_rate", 0.45)])
def test_ruleset_report_at_certain_probabilities(ten_row_selection, metric, limit):
    ds, candidates = ten_row_selection
    result = greedy_select(candidates, ds, BudgetConstraint.build(metric, limit))
    committed, everything = result.ordered_rules[:-1], result.ordered_rules
    budget_rate = fpr if metric == "fpr" else alert_rate

    never = evaluate_ruleset(result.model_copy(update={"last_rule_probability": 0.0}), ds)
    always = evaluate_ruleset(result.model_copy(update={"last_rule_probability": 1.0}), ds)

    assert never.recall_at_budget == pytest.approx(tpr(committed, ds))
    assert never.budget_metric_value == pytest.approx(budget_rate(committed, ds))
    assert always.recall_at_budget == pytest.approx(tpr(everything, ds))
    assert always.budget_metric_value == pytest.approx(budget_rate(everything, ds))
    assert not never.expected and not always.expected


@pytest.mark.parametrize("seed", range(10))
def test_ruleset_report_at_certain_probabilities_on_grown_rules(seed):
    ds = make_random_dataset(n_rows=200, seed=seed)
    candidates = extract_rules(grow_cart(ds, max_splits=8))
    result = greedy_select(candidates, ds, BudgetConstraint.build("fpr", 0.15))
    committed, everything = result.ordered_rules[:-1], result.ordered_rules

    never = evaluate_ruleset(result.model_copy(update={"last_rule_probability": 0.0}), ds)
    always = evaluate_ruleset(result.model_copy(update={"last_rule_probability": 1.0}), ds)

    assert never.recall_at_budget == pytest.approx(tpr(committed, ds))
    assert never.budget_metric_value == pytest.approx(fpr(committed, ds))
    assert always.recall_at_budget == pytest.approx(tpr(everything, ds))
    assert always.budget_metric_value == pytest.approx(fpr(everything, ds))


def test_model_report_uses_raw_scores(random_dataset):
    model = grow_cart(random_dataset, max_splits=6)

    report = evaluate_model(model, random_dataset, BudgetConstraint.build("fpr", 0.1), split_name="train")

    assert report.source is ReportSource.MODEL
    assert report.configuration == "CART"
    assert 0.0 < report.recall_at_budget <= 1.0
    assert report.rule_count is None


# ------------------------------------------------------------
# ------------------------ Aggregation -----------------------
# ------------------------------------------------------------

def test_aggregate_mean_and_sample_std():
    aggregate = aggregate_runs([_report(0.1), _report(0.2), _report(0.3)])

    row = aggregate.rows[0]
    assert row.configuration == "CART+RIFF"
    assert row.n == 3
    assert row.metrics["recall_at_budget"].mean == pytest.approx(0.2)
    assert row.metrics["recall_at_budget"].std == pytest.approx(0.1)
    assert not row.single_run


def test_aggregate_single_run_has_zero_std():
    row = aggregate_runs([_report(0.4)]).rows[0]

    assert row.single_run
    assert row.metrics["recall_at_budget"].std == 0.0


def test_aggregate_groups_by_configuration():
    reports = [
        _report(0.1, rule_count=3),
        _report(0.3, rule_count=5),
        _report(0.05, source=ReportSource.MODEL),
        _report(0.2, model_kind="figu", rule_count=1),
    ]

    aggregate = aggregate_runs(reports)

    assert [row.configuration for row in aggregate.rows] == ["CART+RIFF", "CART", "FIGU+RIFF"]
    assert aggregate.rows[0].metrics["rule_count"].mean == pytest.approx(4.0)
    assert "rule_count" not in aggregate.rows[1].metrics


def test_aggregate_of_nothing_is_an_error():
    with pytest.raises(DataError):
        aggregate_runs([])


def test_aggregate_text_table():
    text = format_aggregate(aggregate_runs([_report(0.1), _report(0.2), _report(0.3)]))

    assert text.startswith("Recall at fpr <= 0.01 on the test split")
    assert "CART+RIFF" in text
    assert "0.200 ± 0.100" in text
