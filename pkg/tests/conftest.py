"""
Shared fixtures for the RIFF test suite.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.rules.models import CandidateRuleSet, Condition, Operator, Rule, RuleProvenance
from riff.src.be.utils.logging_config import BACKEND_LOGGER_NAME


@pytest.fixture(autouse=True)
def reset_backend_logger():
    """The CLI adapter detaches the back-end logger from the root; undo that between tests."""
    yield
    backend_logger = logging.getLogger(BACKEND_LOGGER_NAME)
    backend_logger.handlers.clear()
    backend_logger.setLevel(logging.NOTSET)
    backend_logger.propagate = True


def indicator_rule(feature: str, leaf_id: int = None) -> Rule:
    """Rule covering exactly the rows where the 0/1 column ``feature`` is 1."""
    return Rule(
        conditions=(Condition(feature=feature, op=Operator.GT, threshold=0.5),),
        provenance=RuleProvenance(leaf_id=leaf_id),
    )


@pytest.fixture
def ten_row_selection():
    """
    4 positives (p1..p4) and 6 negatives (n1..n6).

    c1 covers {p1, p2, n1}, c2 covers {p3}, c3 covers {p1, p2, p3, p4, n1, n2}.
    """
    labels = np.array([1, 1, 1, 1, 0, 0, 0, 0, 0, 0])
    in_c1 = [1, 1, 0, 0, 1, 0, 0, 0, 0, 0]
    in_c2 = [0, 0, 1, 0, 0, 0, 0, 0, 0, 0]
    in_c3 = [1, 1, 1, 1, 1, 1, 0, 0, 0, 0]
    ds = LabeledDataset(
        features=np.column_stack([in_c1, in_c2, in_c3]).astype(float),
        labels=labels,
        feature_names=("in_c1", "in_c2", "in_c3"),
    )
    candidates = CandidateRuleSet(rules=[indicator_rule(f"in_c{k}", leaf_id=k) for k in (1, 2, 3)])
    return ds, candidates


def make_random_dataset(n_rows: int = 300, n_features: int = 3, seed: int = 0) -> LabeledDataset:
    """Noisy threshold concept on continuous features."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_rows, n_features))
    logits = 2.0 * X[:, 0] - 1.5 * X[:, 1] + rng.normal(scale=0.8, size=n_rows)
    labels = (logits > 1.0).astype(int)
    return LabeledDataset(
        features=X,
        labels=labels,
        feature_names=tuple(f"f{i}" for i in range(n_features)),
    )


@pytest.fixture
def random_dataset() -> LabeledDataset:
    return make_random_dataset()


def write_fraud_csv(path: Path, n_rows: int = 600, seed: int = 7) -> Path:
    """Synthetic transactions CSV with a numeric, a categorical and a time column."""
    rng = np.random.default_rng(seed)
    amount = rng.gamma(2.0, 50.0, size=n_rows).round(2)
    velocity = rng.integers(0, 10, size=n_rows)
    channel = rng.choice(["web", "pos", "atm"], size=n_rows, p=[0.5, 0.3, 0.2])
    risk = 0.02 * (amount - 100.0) + 0.6 * (velocity - 5) + np.where(channel == "web", 1.0, 0.0)
    label = (risk + rng.normal(scale=1.0, size=n_rows) > 1.5).astype(int)
    frame = pd.DataFrame({
        "month": np.arange(n_rows) // 50,
        "amount": amount,
        "velocity": velocity,
        "channel": channel,
        "is_fraud": label,
    })
    frame.to_csv(path, index=False)
    return path


@pytest.fixture
def fraud_csv(tmp_path) -> Path:
    return write_fraud_csv(tmp_path / "transactions.csv")
