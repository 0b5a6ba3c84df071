"""
Rule data models: threshold conditions, conjunctive rules and candidate sets.

Rules address features by name, so a rule file stays valid when the columns
of the dataset it is applied to are reordered.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from riff.src.utils import file_manager


class Operator(str, Enum):
    LE = "<="
    GT = ">"


# ">" sorts before "<=" so an interval reads "x > lo AND x <= hi"
_OPERATOR_ORDER = {Operator.GT: 0, Operator.LE: 1}


class Condition(BaseModel):
    """``feature <= threshold`` or ``feature > threshold``."""
    model_config = ConfigDict(frozen=True)

    feature: str
    op: Operator
    threshold: float

    @field_validator("threshold")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"threshold must be finite, got {value}")
        return value

    def holds(self, value: float) -> bool:
        return value <= self.threshold if self.op is Operator.LE else value > self.threshold

    def sort_key(self) -> Tuple[str, int]:
        return self.feature, _OPERATOR_ORDER[self.op]

    def render(self) -> str:
        return f"{self.feature} {self.op.value} {self.threshold!r}"


class RuleProvenance(BaseModel):
    """Where a rule came from; all fields are empty for imported rules."""
    model_config = ConfigDict(frozen=True)

    model_kind: Optional[str] = None
    tree_index: Optional[int] = None
    leaf_id: Optional[int] = None


class TrainStats(BaseModel):
    """Counts of the induction rows routed to the source leaf."""
    model_config = ConfigDict(frozen=True)

    positive_count: int = Field(ge=0)
    total_count: int = Field(ge=0)

    @property
    def precision(self) -> float:
        return self.positive_count / self.total_count if self.total_count else 0.0


class Rule(BaseModel):
    """
    Conjunction of conditions predicting the positive class.

    An empty conjunction covers every row. ``satisfiable`` is False when
    simplification found an empty interval on some feature.
    """
    model_config = ConfigDict(frozen=True)

    conditions: Tuple[Condition, ...] = ()
    provenance: RuleProvenance = Field(default_factory=RuleProvenance)
    train_stats: Optional[TrainStats] = None
    satisfiable: bool = True

    @property
    def features(self) -> List[str]:
        return sorted({condition.feature for condition in self.conditions})

    def render(self) -> str:
        """Human-readable form, e.g. ``IF amount > 104.25 AND velocity <= 3.5 THEN FLAG``."""
        if not self.conditions:
            return "IF TRUE THEN FLAG"
        return "IF " + " AND ".join(c.render() for c in self.conditions) + " THEN FLAG"


class CandidateRuleSet(BaseModel):
    """Candidate rules plus the digest of the model they were extracted from."""
    rules: List[Rule] = Field(default_factory=list)
    source_model_digest: Optional[str] = None

    @model_validator(mode="after")
    def _unique_leaves(self) -> "CandidateRuleSet":
        seen = set()
        for rule in self.rules:
            p = rule.provenance
            if p.leaf_id is None:
                continue
            key = (p.model_kind, p.tree_index, p.leaf_id)
            if key in seen:
                raise ValueError(f"duplicate rule provenance {key}")
            seen.add(key)
        return self

    def __len__(self) -> int:
        return len(self.rules)

    def digest(self) -> str:
        return file_manager.digest(self.model_dump(mode="json"))
