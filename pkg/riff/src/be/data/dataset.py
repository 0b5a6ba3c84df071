"""
Core dataset types: an immutable labeled feature matrix and the split specification.
"""

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from riff.cli.utils.errors import ConfigurationError, DataError, SchemaError


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """
    Numeric feature matrix with binary labels.

    Rows carry a stable integer ``row_ids`` assigned at load time; subsets keep
    the ids of the rows they were taken from, so coverage and disjointness can
    be checked across splits.
    """
    features: np.ndarray
    labels: np.ndarray
    feature_names: Tuple[str, ...]
    row_ids: Optional[np.ndarray] = None
    row_order_key: Optional[np.ndarray] = None
    _name_index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DataError(f"Feature matrix must be 2-dimensional, got shape {features.shape}")
        n_rows, n_cols = features.shape

        labels = np.asarray(self.labels)
        if labels.shape != (n_rows,):
            raise DataError(
                f"Label vector length {labels.shape[0] if labels.ndim else 0} "
                f"does not match {n_rows} feature rows"
            )
        bad = np.flatnonzero((labels != 0) & (labels != 1))
        if bad.size:
            raise DataError(f"Label at row {int(bad[0])} is {labels[bad[0]]!r}, expected 0 or 1")

        names = tuple(str(name) for name in self.feature_names)
        if len(names) != n_cols:
            raise SchemaError(f"{len(names)} feature names given for {n_cols} columns")
        if len(set(names)) != len(names):
            duplicates = sorted({name for name in names if names.count(name) > 1})
            raise SchemaError(f"Duplicate feature names: {', '.join(duplicates)}")

        if not np.isfinite(features).all():
            row, col = np.argwhere(~np.isfinite(features))[0]
            raise DataError(f"Non-finite value in feature '{names[col]}' at row {int(row)}")

        row_ids = (
            np.arange(n_rows, dtype=np.int64)
            if self.row_ids is None
            else np.asarray(self.row_ids, dtype=np.int64)
        )
        if row_ids.shape != (n_rows,):
            raise DataError("Row id vector does not match the number of rows")
        if np.unique(row_ids).size != n_rows:
            raise DataError("Row ids must be unique")

        order_key = self.row_order_key
        if order_key is not None:
            order_key = np.asarray(order_key)
            if order_key.shape != (n_rows,):
                raise DataError("Row order key does not match the number of rows")
            order_key = _readonly(order_key)

        object.__setattr__(self, "features", _readonly(features))
        object.__setattr__(self, "labels", _readonly(labels.astype(np.int8)))
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "row_ids", _readonly(row_ids))
        object.__setattr__(self, "row_order_key", order_key)
        object.__setattr__(self, "_name_index", {name: i for i, name in enumerate(names)})

    @property
    def n_rows(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def positive_mask(self) -> np.ndarray:
        return self.labels == 1

    @property
    def n_positive(self) -> int:
        return int(self.labels.sum())

    @property
    def n_negative(self) -> int:
        return self.n_rows - self.n_positive

    @property
    def positive_rate(self) -> float:
        return self.n_positive / self.n_rows if self.n_rows else 0.0

    def feature_index(self, name: str) -> int:
        """Column index of ``name``; SchemaError when the feature is unknown."""
        try:
            return self._name_index[name]
        except KeyError:
            raise SchemaError(f"Feature '{name}' is not present in the dataset")

    def column(self, name: str) -> np.ndarray:
        return self.features[:, self.feature_index(name)]

    def take(self, positions: Sequence[int]) -> "LabeledDataset":
        """Subset by positional index, keeping row ids and order keys."""
        positions = np.asarray(positions, dtype=np.int64)
        return LabeledDataset(
            features=self.features[positions],
            labels=self.labels[positions],
            feature_names=self.feature_names,
            row_ids=self.row_ids[positions],
            row_order_key=None if self.row_order_key is None else self.row_order_key[positions],
        )

    def digest(self) -> str:
        """SHA-256 over row ids, labels, features and feature names."""
        h = hashlib.sha256()
        h.update("\x1f".join(self.feature_names).encode("utf-8"))
        h.update(self.row_ids.tobytes())
        h.update(self.labels.tobytes())
        h.update(self.features.tobytes())
        return h.hexdigest()


class SplitMode(str, Enum):
    """How rows are assigned to train/validation/test."""
    TEMPORAL = "temporal"
    RANDOM = "random"


class SplitSpec(BaseModel):
    """Train/validation/test proportions and assignment mode."""
    train_fraction: float = Field(ge=0.0, le=1.0)
    validation_fraction: float = Field(ge=0.0, le=1.0)
    test_fraction: float = Field(ge=0.0, le=1.0)
    mode: SplitMode = SplitMode.RANDOM
    seed: int = 0

    @model_validator(mode="after")
    def _fractions_sum_to_one(self) -> "SplitSpec":
        total = self.train_fraction + self.validation_fraction + self.test_fraction
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1, got {total}")
        return self

    @classmethod
    def build(cls, **kwargs) -> "SplitSpec":
        """Construct and convert pydantic validation failures to ConfigurationError."""
        try:
            return cls(**kwargs)
        except ValueError as e:
            raise ConfigurationError(f"Invalid split specification: {e}")
