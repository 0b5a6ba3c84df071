"""
CSV ingestion and persistence of dataset splits.

Categorical (non-numeric) columns are encoded so that every feature supports
threshold conditions; missing values are imputed with a sentinel one below the
column minimum so they always route to the "<=" branch.
"""

import logging
from collections import Counter
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from riff.cli.utils.errors import ConfigurationError, DataError, FileSystemError, SchemaError
from riff.src.be.data.dataset import LabeledDataset, SplitSpec
from riff.src.config import ORDER_KEY_COLUMN, ROW_ID_COLUMN

logger = logging.getLogger(__name__)

_TRUE_LABELS = {"1", "1.0", "true", "yes"}
_FALSE_LABELS = {"0", "0.0", "false", "no"}


class CategoricalPolicy(str, Enum):
    """Encoding applied to non-numeric columns."""
    ORDINAL = "ordinal"
    ONEHOT = "onehot"


def _read_header(path: Path) -> List[str]:
    header = pd.read_csv(path, header=None, nrows=1, dtype=str, keep_default_na=False)
    if header.empty:
        raise SchemaError(f"{path} has no header row")
    return [str(name).strip() for name in header.iloc[0].tolist()]


def _parse_labels(raw: pd.Series) -> np.ndarray:
    labels = np.empty(len(raw), dtype=np.int8)
    for position, value in enumerate(raw.tolist()):
        token = str(value).strip().lower()
        if token in _TRUE_LABELS:
            labels[position] = 1
        elif token in _FALSE_LABELS:
            labels[position] = 0
        else:
            raise DataError(f"Unparseable label {value!r} at row {position}")
    return labels


def _impute_missing(values: pd.Series) -> pd.Series:
    if not values.isna().any():
        return values
    sentinel = values.min() - 1.0 if values.notna().any() else -1.0
    return values.fillna(sentinel)


def encode_ordinal(values: pd.Series) -> pd.Series:
    """
    Map categories to 0..k-1 by descending frequency, ties in lexicographic order.

    Missing values are left for the sentinel imputation (which yields -1).
    """
    present = values.dropna().astype(str)
    counts = Counter(present.tolist())
    ranked = sorted(counts, key=lambda category: (-counts[category], category))
    mapping = {category: float(rank) for rank, category in enumerate(ranked)}
    encoded = values.map(lambda v: mapping[str(v)] if pd.notna(v) else np.nan)
    return encoded.astype(float)


def _encode_frame(frame: pd.DataFrame, policy: CategoricalPolicy) -> pd.DataFrame:
    columns: Dict[str, pd.Series] = {}
    for name in frame.columns:
        series = frame[name]
        numeric = pd.to_numeric(series, errors="coerce")
        is_numeric = numeric.notna().sum() == series.notna().sum()
        if is_numeric:
            columns[name] = _impute_missing(numeric.astype(float))
        elif policy is CategoricalPolicy.ONEHOT:
            dummies = pd.get_dummies(series.astype("string"), prefix=name, prefix_sep="=", dtype=float)
            for dummy_name in sorted(dummies.columns):
                if dummy_name in frame.columns or dummy_name in columns:
                    raise SchemaError(f"One-hot column '{dummy_name}' collides with an existing column")
                columns[dummy_name] = dummies[dummy_name]
        else:
            columns[name] = _impute_missing(encode_ordinal(series))
    return pd.DataFrame(columns, index=frame.index)


def _order_key(series: pd.Series, column: str) -> np.ndarray:
    numeric = pd.to_numeric(series, errors="coerce")
    if numeric.notna().all():
        return numeric.to_numpy(dtype=np.float64)
    parsed = pd.to_datetime(series, errors="coerce")
    if parsed.notna().all():
        return parsed.to_numpy(dtype="datetime64[ns]").astype(np.int64)
    raise DataError(f"Order column '{column}' contains values that are neither numeric nor dates")


def load_csv(
    path: Path,
    label_column: str,
    order_column: Optional[str] = None,
    categorical_policy: CategoricalPolicy = CategoricalPolicy.ORDINAL,
    id_column: Optional[str] = None,
    drop_columns: Iterable[str] = (),
) -> LabeledDataset:
    """
    Load a comma-separated UTF-8 file with a header into a LabeledDataset.

    Args:
        path: CSV file path
        label_column: Name of the 0/1 label column
        order_column: Optional column used as the temporal row order key
        categorical_policy: Encoding for non-numeric columns
        id_column: Optional column holding stable integer row ids
            (persisted splits carry ``row_id``); defaults to 0..n-1
        drop_columns: Columns excluded from the features

    Returns:
        LabeledDataset with row order preserved

    Raises:
        SchemaError: Missing or duplicate columns
        DataError: Unparseable labels or row ids, or a feature named
            ``row_id`` or ``order_key``
    """
    path = Path(path).expanduser()
    if not path.is_file():
        raise FileSystemError(f"File not found: {path}")
    try:
        categorical_policy = CategoricalPolicy(categorical_policy)
    except ValueError:
        raise ConfigurationError(f"Unknown categorical policy '{categorical_policy}'")

    header = _read_header(path)
    duplicates = sorted({name for name in header if header.count(name) > 1})
    if duplicates:
        raise SchemaError(f"Duplicate columns in {path.name}: {', '.join(duplicates)}")

    drop_columns = list(drop_columns)
    required = [label_column] + [c for c in (order_column, id_column) if c] + drop_columns
    missing = [name for name in required if name not in header]
    if missing:
        raise SchemaError(f"Columns not found in {path.name}: {', '.join(missing)}")

    frame = pd.read_csv(path, dtype=str, keep_default_na=True, encoding="utf-8")
    frame.columns = header
    logger.debug(f"Read {len(frame)} rows x {len(header)} columns from {path}")

    labels = _parse_labels(frame[label_column])

    row_ids = None
    if id_column:
        ids = pd.to_numeric(frame[id_column], errors="coerce")
        if ids.isna().any() or (ids % 1 != 0).any():
            bad = int(np.flatnonzero((ids.isna() | (ids % 1 != 0)).to_numpy())[0])
            raise DataError(f"Row id column '{id_column}' is not an integer at row {bad}")
        row_ids = ids.to_numpy(dtype=np.int64)

    order_key = _order_key(frame[order_column], order_column) if order_column else None

    excluded = {label_column, *drop_columns}
    if order_column:
        excluded.add(order_column)
    if id_column:
        excluded.add(id_column)
    feature_frame = _encode_frame(frame[[c for c in header if c not in excluded]], categorical_policy)
    reserved = sorted({ROW_ID_COLUMN, ORDER_KEY_COLUMN} & set(feature_frame.columns))
    if reserved:
        raise DataError(
            f"Feature column(s) {', '.join(reserved)} in {path.name} are reserved for split files; "
            f"use them as the id or order column, or drop them"
        )

    dataset = LabeledDataset(
        features=feature_frame.to_numpy(dtype=np.float64),
        labels=labels,
        feature_names=tuple(feature_frame.columns),
        row_ids=row_ids,
        row_order_key=order_key,
    )
    logger.info(
        f"Loaded {path.name}: {dataset.n_rows} rows, {dataset.n_features} features, "
        f"positive rate {dataset.positive_rate:.4f}"
    )
    return dataset


def to_frame(ds: LabeledDataset, label_column: str = "label") -> pd.DataFrame:
    """Tabular view with the row id first and the label last."""
    frame = pd.DataFrame(ds.features, columns=list(ds.feature_names))
    frame.insert(0, ROW_ID_COLUMN, ds.row_ids)
    if ds.row_order_key is not None:
        frame[ORDER_KEY_COLUMN] = ds.row_order_key
    frame[label_column] = ds.labels
    return frame


def write_split(ds: LabeledDataset, path: Path, label_column: str = "label") -> Path:
    """Persist a split as CSV; float values are written with full precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    to_frame(ds, label_column).to_csv(path, index=False, float_format="%.17g")
    return path


def load_split(path: Path, label_column: str = "label") -> LabeledDataset:
    """Reload a CSV written by ``write_split`` (row ids and order key restored)."""
    path = Path(path).expanduser()
    if not path.is_file():
        raise FileSystemError(f"File not found: {path}")
    header = _read_header(path)
    return load_csv(
        path,
        label_column=label_column,
        order_column=ORDER_KEY_COLUMN if ORDER_KEY_COLUMN in header else None,
        id_column=ROW_ID_COLUMN if ROW_ID_COLUMN in header else None,
    )


def write_split_manifest(
    path: Path,
    spec: SplitSpec,
    splits: Dict[str, LabeledDataset],
    extra: Optional[Dict[str, object]] = None,
) -> Path:
    """Sidecar manifest in plain key=value form."""
    entries: Dict[str, object] = {
        "created_at": datetime.now().isoformat(timespec="seconds"),
        "mode": spec.mode.value,
        "seed": spec.seed,
        "train_fraction": spec.train_fraction,
        "validation_fraction": spec.validation_fraction,
        "test_fraction": spec.test_fraction,
    }
    for name, ds in splits.items():
        entries[f"{name}_rows"] = ds.n_rows
        entries[f"{name}_positives"] = ds.n_positive
    entries.update(extra or {})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{key}={value}\n" for key, value in entries.items()), encoding="utf-8")
    return path


def load_scores(path: Path, ds: LabeledDataset) -> np.ndarray:
    """
    Read an external ``row_id,score`` CSV and align it to ``ds`` row order.

    Raises:
        SchemaError: Missing columns
        DataError: Rows of ``ds`` without a score, or non-numeric scores
    """
    path = Path(path).expanduser()
    if not path.is_file():
        raise FileSystemError(f"File not found: {path}")
    frame = pd.read_csv(path)
    missing = [c for c in (ROW_ID_COLUMN, "score") if c not in frame.columns]
    if missing:
        raise SchemaError(f"Score file {path.name} lacks columns: {', '.join(missing)}")
    scores = pd.to_numeric(frame["score"], errors="coerce")
    if scores.isna().any():
        raise DataError(f"Non-numeric score at row {int(np.flatnonzero(scores.isna().to_numpy())[0])}")
    by_id = pd.Series(scores.to_numpy(dtype=np.float64), index=frame[ROW_ID_COLUMN].astype(np.int64))
    if by_id.index.has_duplicates:
        raise DataError(f"Score file {path.name} has duplicate row ids")
    aligned = by_id.reindex(ds.row_ids)
    if aligned.isna().any():
        missing_id = int(ds.row_ids[np.flatnonzero(aligned.isna().to_numpy())[0]])
        raise DataError(f"No score for row id {missing_id}")
    return aligned.to_numpy(dtype=np.float64)
