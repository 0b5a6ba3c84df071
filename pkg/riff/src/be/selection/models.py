"""
Selection data models: the budget constraint, per-step trace and result.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from riff.cli.utils.errors import ConfigurationError
from riff.src.be.rules.models import Rule


class BudgetMetric(str, Enum):
    """Which rate the budget caps: false-positive rate or alert rate."""
    FPR = "fpr"
    ALERT_RATE = "alert-rate"


class BudgetConstraint(BaseModel):
    metric: BudgetMetric = BudgetMetric.FPR
    max_value: float = Field(gt=0.0, le=1.0)

    @classmethod
    def build(cls, metric, max_value: float) -> "BudgetConstraint":
        try:
            return cls(metric=BudgetMetric(metric), max_value=max_value)
        except ValueError as e:
            raise ConfigurationError(f"Invalid budget constraint: {e}")

    def describe(self) -> str:
        return f"{self.metric.value} <= {self.max_value:g}"


class SelectionStep(BaseModel):
    """
    One greedy step.

    ``precision``, ``true_positives``, ``false_positives`` and ``remaining_rows``
    are measured on the not-yet-covered rows the step chose from; the rates are
    cumulative over the full selection set after adding the rule.
    """
    step: int
    candidate_index: int
    precision: float
    true_positives: int
    false_positives: int
    remaining_rows: int
    tpr: float
    fpr: float
    alert_rate: float
    budget_value: float


class SelectionResult(BaseModel):
    """
    Ordered rules r_1..r_l picked by greedy selection.

    Every rule but the last always fires; the last fires with probability
    ``last_rule_probability`` so the expected budget metric meets the limit.
    """
    ordered_rules: List[Rule] = Field(default_factory=list)
    candidate_indices: List[int] = Field(default_factory=list)
    step_trace: List[SelectionStep] = Field(default_factory=list)
    last_rule_probability: float = Field(default=1.0, ge=0.0, le=1.0)
    terminated_early: bool = False
    budget: BudgetConstraint
    selection_digest: Optional[str] = None
    candidates_digest: Optional[str] = None

    @property
    def rule_count(self) -> int:
        return len(self.ordered_rules)

    def budget_before_last(self) -> float:
        return self.step_trace[-2].budget_value if len(self.step_trace) > 1 else 0.0

    def budget_after_last(self) -> float:
        return self.step_trace[-1].budget_value if self.step_trace else 0.0
