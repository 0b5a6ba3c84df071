"""
One (seed, model kind) cell of the experiment protocol, and evaluation of
externally produced rule sets and scores.

A cell builds the induction and selection sets from the training split, runs
the split-budget line search on the validation split and then evaluates the
chosen rule set and the best raw tree model on the test split, once.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.data.loader import load_scores
from riff.src.be.data.sampling import SampleRatioMode, make_induction_selection
from riff.src.be.evaluation.metrics import evaluate_model, evaluate_ruleset, evaluate_scores
from riff.src.be.evaluation.models import MetricsReport, ReportSource
from riff.src.be.rules.extraction import extract_rules
from riff.src.be.rules.io import load_rules
from riff.src.be.rules.models import CandidateRuleSet
from riff.src.be.selection.greedy import greedy_select
from riff.src.be.selection.models import BudgetConstraint, SelectionResult
from riff.src.be.trees.growers import grow_model
from riff.src.be.trees.model import ForestModel, ModelKind
from riff.src.config import DEFAULT_MIN_LEAF, DEFAULT_TAU, derive_seed

logger = logging.getLogger(__name__)


class CellSettings(BaseModel):
    """Everything a cell needs besides the data and the seed."""
    model_kind: ModelKind
    grid: List[int] = Field(min_length=1)
    budget: BudgetConstraint
    sample_ratio: float = Field(gt=0.0, le=1.0)
    target_positive_rate: float = Field(gt=0.0, lt=1.0)
    ratio_mode: SampleRatioMode = SampleRatioMode.PER_SUBSET
    min_leaf: int = Field(default=DEFAULT_MIN_LEAF, ge=1)
    tau: float = Field(default=DEFAULT_TAU, ge=0.0, le=1.0)
    filter_low_precision: bool = False
    resample_per_grid_value: bool = False

    @field_validator("grid")
    @classmethod
    def _increasing(cls, grid: List[int]) -> List[int]:
        if any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise ValueError(f"grid must be strictly increasing positive integers, got {grid}")
        return grid


class GridPoint(BaseModel):
    """Validation outcome of one split budget."""
    max_splits: int
    total_splits: int
    n_trees: int
    candidate_count: int
    rule_count: int
    terminated_early: bool
    validation_recall: float
    validation_conservative_recall: float
    validation_budget_value: float
    baseline_validation_recall: float


@dataclass
class CellOutcome:
    seed: int
    model_kind: ModelKind
    chosen_max_splits: int
    model: ForestModel
    candidates: CandidateRuleSet
    selection: SelectionResult
    test_report: MetricsReport
    baseline_max_splits: int
    baseline_model: ForestModel
    baseline_report: MetricsReport
    line_search: List[GridPoint] = field(default_factory=list)
    induction_digest: str = ""
    selection_digest: str = ""


def build_subsets(
    train: LabeledDataset,
    settings: CellSettings,
    seed: int,
    max_splits: Optional[int] = None,
) -> Tuple[LabeledDataset, LabeledDataset]:
    """Induction and selection sets; fixed per seed unless resampled per grid value."""
    stage = "subsample" if max_splits is None else f"subsample:{max_splits}"
    return make_induction_selection(
        train,
        settings.sample_ratio,
        settings.target_positive_rate,
        derive_seed(seed, stage),
        settings.ratio_mode,
    )


def induce_and_select(
    induction: LabeledDataset,
    selection: LabeledDataset,
    settings: CellSettings,
    max_splits: int,
) -> Tuple[ForestModel, CandidateRuleSet, SelectionResult]:
    """Train, extract and select for one split budget."""
    model = grow_model(settings.model_kind, induction, max_splits, settings.min_leaf, settings.tau)
    min_precision = induction.positive_rate if settings.filter_low_precision else None
    candidates = extract_rules(model, min_precision=min_precision)
    result = greedy_select(candidates, selection, settings.budget)
    return model, candidates, result


def run_cell(
    train: LabeledDataset,
    validation: LabeledDataset,
    test: LabeledDataset,
    settings: CellSettings,
    seed: int,
) -> CellOutcome:
    """
    Run the line search over ``settings.grid`` and evaluate the winners on test.

    The rule set maximizing validation expected recall wins (ties: smaller
    budget); the raw model baseline is tuned the same way on its own
    validation recall. ``test`` is read only by the final evaluation.
    """
    kind = settings.model_kind
    fixed = None if settings.resample_per_grid_value else build_subsets(train, settings, seed)

    line_search: List[GridPoint] = []
    best = None
    best_baseline = None
    for max_splits in settings.grid:
        induction, selection = fixed or build_subsets(train, settings, seed, max_splits)
        model, candidates, result = induce_and_select(induction, selection, settings, max_splits)
        report = evaluate_ruleset(result, validation, settings.budget, "validation", seed, kind.value, max_splits)
        baseline = evaluate_model(model, validation, settings.budget, "validation", seed)

        line_search.append(GridPoint(
            max_splits=max_splits,
            total_splits=model.total_splits,
            n_trees=model.n_trees,
            candidate_count=len(candidates),
            rule_count=result.rule_count,
            terminated_early=result.terminated_early,
            validation_recall=report.recall_at_budget,
            validation_conservative_recall=report.conservative_recall,
            validation_budget_value=report.budget_metric_value,
            baseline_validation_recall=baseline.recall_at_budget,
        ))
        logger.info(
            f"seed {seed} {kind.value} splits={max_splits}: validation recall "
            f"{report.recall_at_budget:.4f} with {result.rule_count} rules, "
            f"model recall {baseline.recall_at_budget:.4f}"
        )

        if best is None or report.recall_at_budget > best[0]:
            best = (report.recall_at_budget, max_splits, model, candidates, result, induction, selection)
        if best_baseline is None or baseline.recall_at_budget > best_baseline[0]:
            best_baseline = (baseline.recall_at_budget, max_splits, model)

    _, chosen, model, candidates, result, induction, selection = best
    _, baseline_splits, baseline_model = best_baseline

    test_report = evaluate_ruleset(result, test, settings.budget, "test", seed, kind.value, chosen)
    baseline_report = evaluate_model(baseline_model, test, settings.budget, "test", seed)
    logger.info(
        f"seed {seed} {kind.value}: chose {chosen} splits, test recall "
        f"{test_report.recall_at_budget:.4f} ({test_report.rule_count} rules); "
        f"model at {baseline_splits} splits {baseline_report.recall_at_budget:.4f}"
    )
    return CellOutcome(
        seed=seed,
        model_kind=kind,
        chosen_max_splits=chosen,
        model=model,
        candidates=candidates,
        selection=result,
        test_report=test_report,
        baseline_max_splits=baseline_splits,
        baseline_model=baseline_model,
        baseline_report=baseline_report,
        line_search=line_search,
        induction_digest=induction.digest(),
        selection_digest=selection.digest(),
    )


def fixed_selection(
    rule_set: CandidateRuleSet,
    budget: BudgetConstraint,
    last_rule_probability: Optional[float] = None,
) -> SelectionResult:
    """Wrap an already chosen, ordered rule list as a SelectionResult without a trace."""
    return SelectionResult(
        ordered_rules=list(rule_set.rules),
        candidate_indices=list(range(len(rule_set.rules))),
        last_rule_probability=1.0 if last_rule_probability is None else last_rule_probability,
        budget=budget,
    )


def evaluate_external(
    rules_file: Path,
    ds: LabeledDataset,
    budget: BudgetConstraint,
    split_name: str = "test",
) -> MetricsReport:
    """
    Metrics of an imported rule set on ``ds``.

    A ``last_rule_probability`` stored in the file is honored, so a rule set
    written by the selection step reproduces the pipeline's own report.

    Raises:
        SchemaError: A rule references a feature the dataset lacks
    """
    rule_set, probability = load_rules(rules_file)
    result = fixed_selection(rule_set, budget, probability)
    source = ReportSource.EXTERNAL_RULES
    return evaluate_ruleset(result, ds, budget, split_name, source=source)


def evaluate_external_scores(
    scores_file: Path,
    ds: LabeledDataset,
    budget: BudgetConstraint,
    split_name: str = "test",
) -> MetricsReport:
    """Recall at the budget of externally computed ``row_id,score`` predictions."""
    return evaluate_scores(load_scores(scores_file, ds), ds, budget, split_name)
