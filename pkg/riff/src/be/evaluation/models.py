"""
Evaluation report models.
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from riff.src.be.selection.models import BudgetMetric


class ReportSource(str, Enum):
    """What produced the evaluated flags or scores."""
    RULESET = "ruleset"
    MODEL = "model"
    EXTERNAL_RULES = "external-rules"
    EXTERNAL_SCORES = "external-scores"


class MetricsReport(BaseModel):
    """
    Recall at the budget on one split.

    For rule sets ``recall_at_budget`` is the expectation under the last
    rule's firing probability and ``conservative_recall`` the recall of the
    rules that always fire. For score models recall is interpolated on the
    ROC curve at the budget.
    """
    recall_at_budget: float = Field(ge=0.0, le=1.0)
    budget_metric_value: float = Field(ge=0.0, le=1.0)
    budget_metric: BudgetMetric
    budget_max: float
    rule_count: Optional[int] = Field(default=None, ge=0)
    conservative_recall: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    last_rule_probability: Optional[float] = None
    expected: bool = False
    split_name: str
    seed: Optional[int] = None
    model_kind: Optional[str] = None
    source: ReportSource = ReportSource.RULESET
    max_splits: Optional[int] = None

    @property
    def configuration(self) -> str:
        """Row label in aggregate tables, e.g. ``CART+RIFF`` or ``CART``."""
        if self.source is ReportSource.RULESET:
            return f"{(self.model_kind or 'rules').upper()}+RIFF"
        if self.source is ReportSource.MODEL:
            return (self.model_kind or "model").upper()
        return "External rules" if self.source is ReportSource.EXTERNAL_RULES else "External scores"


class MetricSummary(BaseModel):
    mean: float
    std: float


class AggregateRow(BaseModel):
    """Mean and sample standard deviation per metric for one configuration."""
    configuration: str
    source: ReportSource
    model_kind: Optional[str] = None
    n: int
    single_run: bool
    metrics: Dict[str, MetricSummary]


class AggregateReport(BaseModel):
    split_name: str
    budget_metric: BudgetMetric
    budget_max: float
    rows: List[AggregateRow] = Field(default_factory=list)
