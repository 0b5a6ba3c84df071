"""
Greedy precision-first rule selection under a rate budget, and its
randomized relaxation.

Each step picks the candidate with the highest precision on the rows not yet
covered, removes the rows it covers and stops once the budget metric of the
selected set reaches the limit. The rule that crosses the limit is kept and
fires with a probability chosen so the expected budget metric equals the limit.
"""

import logging
from typing import Optional

import numpy as np

from riff.cli.utils.errors import DataError
from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.rules.coverage import rule_matrix
from riff.src.be.rules.models import CandidateRuleSet
from riff.src.be.selection.metrics import mask_alert_rate, mask_budget_value, mask_fpr, mask_tpr
from riff.src.be.selection.models import BudgetConstraint, BudgetMetric, SelectionResult, SelectionStep

logger = logging.getLogger(__name__)


def _pick(covered: np.ndarray, positive: np.ndarray, available: np.ndarray) -> Optional[int]:
    """
    Index of the best available candidate, or None when none covers a remaining row.

    Order: higher precision, more true positives, fewer false positives,
    earlier candidate.
    """
    tp = (covered & positive).sum(axis=1)
    fp = (covered & ~positive).sum(axis=1)
    total = tp + fp
    eligible = available & (total > 0)
    if not eligible.any():
        return None
    idx = np.flatnonzero(eligible)
    precision = tp[idx] / total[idx]
    order = np.lexsort((idx, fp[idx], -tp[idx], -precision))
    return int(idx[order[0]])


def _missing_class(ds: LabeledDataset, budget: BudgetConstraint) -> Optional[str]:
    if ds.n_positive == 0:
        return "positive"
    if budget.metric is BudgetMetric.FPR and ds.n_negative == 0:
        return "negative"
    return None


def greedy_select(
    candidates: CandidateRuleSet,
    ds: LabeledDataset,
    budget: BudgetConstraint,
) -> SelectionResult:
    """
    Select rules from ``candidates`` on ``ds`` until ``budget`` is reached.

    Returns:
        SelectionResult with the full step trace and the last rule's firing
        probability. ``terminated_early`` is set when the candidates run out
        (or cover nothing new) before the budget is reached.

    A selection set without positives (or without negatives under an FPR
    budget) yields an empty, early-terminated result.

    Raises:
        DataError: No candidates
    """
    if not candidates.rules:
        raise DataError("No candidate rules to select from")

    missing = _missing_class(ds, budget)
    if missing:
        logger.warning(f"Selection set has no {missing} rows; nothing can be selected")
        return SelectionResult(
            terminated_early=True,
            budget=budget,
            selection_digest=ds.digest(),
            candidates_digest=candidates.digest(),
        )

    masks = rule_matrix(candidates.rules, ds)
    positive = ds.positive_mask
    remaining = np.ones(ds.n_rows, dtype=bool)
    selected = np.zeros(ds.n_rows, dtype=bool)
    available = np.ones(len(candidates.rules), dtype=bool)

    steps = []
    budget_value = mask_budget_value(selected, ds, budget.metric)
    terminated_early = False

    while budget_value < budget.max_value:
        covered = masks & remaining
        choice = _pick(covered, positive, available)
        if choice is None:
            terminated_early = True
            break

        tp = int((covered[choice] & positive).sum())
        fp = int((covered[choice] & ~positive).sum())
        remaining_rows = int(remaining.sum())

        available[choice] = False
        selected |= masks[choice]
        remaining &= ~masks[choice]
        budget_value = mask_budget_value(selected, ds, budget.metric)

        steps.append(SelectionStep(
            step=len(steps) + 1,
            candidate_index=choice,
            precision=tp / (tp + fp),
            true_positives=tp,
            false_positives=fp,
            remaining_rows=remaining_rows,
            tpr=mask_tpr(selected, ds),
            fpr=mask_fpr(selected, ds) if ds.n_negative else 0.0,
            alert_rate=mask_alert_rate(selected, ds),
            budget_value=budget_value,
        ))

    if terminated_early:
        logger.warning(
            f"Selection stopped after {len(steps)} rule(s) with {budget.metric.value} "
            f"{budget_value:.6g} below the limit {budget.max_value:g}: candidates exhausted"
        )

    result = SelectionResult(
        ordered_rules=[candidates.rules[s.candidate_index] for s in steps],
        candidate_indices=[s.candidate_index for s in steps],
        step_trace=steps,
        terminated_early=terminated_early,
        budget=budget,
        selection_digest=ds.digest(),
        candidates_digest=candidates.digest(),
    )
    result.last_rule_probability = randomize(result, budget)
    logger.info(
        f"Selected {result.rule_count} of {len(candidates.rules)} candidates "
        f"({budget.metric.value} {budget_value:.6g}, last rule probability "
        f"{result.last_rule_probability:.4f})"
    )
    return result


def randomize(result: SelectionResult, budget: Optional[BudgetConstraint] = None) -> float:
    """
    Firing probability of the last selected rule.

    ``(limit - budget(S_{l-1})) / (budget(S_l) - budget(S_{l-1}))`` clamped to
    [0, 1]; 1 when selection terminated early or the last rule did not move
    the budget metric.
    """
    budget = budget or result.budget
    if result.terminated_early or not result.step_trace:
        if result.step_trace:
            logger.warning("Selection terminated early; the last rule fires with probability 1")
        return 1.0
    before, after = result.budget_before_last(), result.budget_after_last()
    if after <= before:
        return 1.0
    return float(min(1.0, max(0.0, (budget.max_value - before) / (after - before))))


def expected_tpr(result: SelectionResult, ds: LabeledDataset) -> float:
    """
    Expected recall on ``ds``: ``(1 - p) * TPR(S_{l-1}) + p * TPR(S_l)`` with p the
    last rule's firing probability; plain TPR(S_l) after early termination.
    """
    if not result.ordered_rules:
        return 0.0
    masks = rule_matrix(result.ordered_rules, ds)
    committed = masks[:-1].any(axis=0)
    full = committed | masks[-1]
    if result.terminated_early:
        return mask_tpr(full, ds)
    p = result.last_rule_probability
    return (1.0 - p) * mask_tpr(committed, ds) + p * mask_tpr(full, ds)
