"""
Dataset splitting and class-rebalanced subsampling.

Every function here is a pure function of (input, parameters, seed): random
draws come from ``numpy.random.default_rng(seed)`` and nothing else.
"""

import logging
import math
from enum import Enum
from typing import Tuple

import numpy as np

from riff.cli.utils.errors import ConfigurationError
from riff.src.be.data.dataset import LabeledDataset, SplitMode, SplitSpec
from riff.src.config import derive_seed

logger = logging.getLogger(__name__)


class SampleRatioMode(str, Enum):
    """Whether ``sample_ratio`` sizes each induction/selection subset or their union."""
    PER_SUBSET = "per-subset"
    UNION = "union"


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def split_dataset(ds: LabeledDataset, spec: SplitSpec) -> Tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """
    Partition ``ds`` into train, validation and test.

    Temporal mode sorts rows by the order key (stable) and gives the earliest
    rows to train; random mode permutes rows with ``spec.seed`` and slices.
    Rows inside each split keep their original relative order.
    """
    n = ds.n_rows
    if spec.mode is SplitMode.TEMPORAL:
        if ds.row_order_key is None:
            raise ConfigurationError("Temporal split requires an order column")
        ordering = np.argsort(ds.row_order_key, kind="stable")
    else:
        ordering = np.random.default_rng(spec.seed).permutation(n)

    n_train = min(n, round_half_up(spec.train_fraction * n))
    n_validation = min(n - n_train, round_half_up(spec.validation_fraction * n))
    if spec.test_fraction == 0.0:
        n_validation = n - n_train

    parts = np.split(ordering, [n_train, n_train + n_validation])
    train, validation, test = (ds.take(np.sort(part)) for part in parts)
    logger.info(
        f"Split {n} rows ({spec.mode.value}): train={train.n_rows}, "
        f"validation={validation.n_rows}, test={test.n_rows}"
    )
    return train, validation, test


def _rebalanced_positions(
    positives: np.ndarray,
    negatives: np.ndarray,
    n_target: int,
    target_positive_rate: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw round(rate * n) positives and the rest negatives, shrinking n when a class runs out."""
    n_total = n_target
    n_pos = round_half_up(target_positive_rate * n_total)

    if n_pos > positives.size:
        shrunk = round_half_up(positives.size / target_positive_rate)
        logger.warning(
            f"Only {positives.size} positives available for {n_pos} requested; "
            f"shrinking subset from {n_total} to {shrunk} rows to keep positive rate "
            f"{target_positive_rate}"
        )
        n_total = shrunk
        n_pos = positives.size

    n_neg = n_total - n_pos
    if n_neg > negatives.size:
        shrunk = round_half_up(negatives.size / (1.0 - target_positive_rate))
        logger.warning(
            f"Only {negatives.size} negatives available for {n_neg} requested; "
            f"shrinking subset from {n_total} to {shrunk} rows to keep positive rate "
            f"{target_positive_rate}"
        )
        n_total = shrunk
        n_pos = min(positives.size, round_half_up(target_positive_rate * n_total))
        n_neg = min(negatives.size, n_total - n_pos)

    chosen = np.concatenate([
        rng.choice(positives, size=n_pos, replace=False),
        rng.choice(negatives, size=n_neg, replace=False),
    ])
    return rng.permutation(chosen)


def _check_sampling_parameters(sample_ratio: float, target_positive_rate: float):
    if not 0.0 < sample_ratio <= 1.0:
        raise ConfigurationError(f"sample_ratio must be in (0, 1], got {sample_ratio}")
    if not 0.0 < target_positive_rate < 1.0:
        raise ConfigurationError(f"target_positive_rate must be in (0, 1), got {target_positive_rate}")


def subsample(ds: LabeledDataset, sample_ratio: float, target_positive_rate: float, seed: int) -> LabeledDataset:
    """
    Random subset of about ``sample_ratio * |ds|`` rows with the requested positive rate.

    When a class cannot supply its share the subset shrinks (with a warning);
    the positive rate is never lowered silently.
    """
    _check_sampling_parameters(sample_ratio, target_positive_rate)
    rng = np.random.default_rng(seed)
    positives = np.flatnonzero(ds.positive_mask)
    negatives = np.flatnonzero(~ds.positive_mask)
    n_target = round_half_up(sample_ratio * ds.n_rows)
    return ds.take(_rebalanced_positions(positives, negatives, n_target, target_positive_rate, rng))


def make_induction_selection(
    train: LabeledDataset,
    sample_ratio: float,
    target_positive_rate: float,
    seed: int,
    ratio_mode: SampleRatioMode = SampleRatioMode.PER_SUBSET,
) -> Tuple[LabeledDataset, LabeledDataset]:
    """
    Build the disjoint induction and selection subsets of ``train``.

    Positives and negatives are each shuffled and dealt into two halves, so the
    subsets cannot share rows and draw on equal pools; each half is then
    rebalanced independently with its own derived seed.
    """
    _check_sampling_parameters(sample_ratio, target_positive_rate)
    partition_rng = np.random.default_rng(derive_seed(seed, "partition"))

    pools = []
    for mask in (train.positive_mask, ~train.positive_mask):
        shuffled = partition_rng.permutation(np.flatnonzero(mask))
        pools.append((shuffled[0::2], shuffled[1::2]))
    (pos_a, pos_b), (neg_a, neg_b) = pools

    ratio_mode = SampleRatioMode(ratio_mode)
    subset_ratio = sample_ratio if ratio_mode is SampleRatioMode.PER_SUBSET else sample_ratio / 2.0
    n_target = round_half_up(subset_ratio * train.n_rows)

    induction_rng = np.random.default_rng(derive_seed(seed, "induction"))
    selection_rng = np.random.default_rng(derive_seed(seed, "selection"))
    induction = train.take(_rebalanced_positions(pos_a, neg_a, n_target, target_positive_rate, induction_rng))
    selection = train.take(_rebalanced_positions(pos_b, neg_b, n_target, target_positive_rate, selection_rng))

    logger.info(
        f"Induction set: {induction.n_rows} rows ({induction.n_positive} positive); "
        f"selection set: {selection.n_rows} rows ({selection.n_positive} positive)"
    )
    return induction, selection
