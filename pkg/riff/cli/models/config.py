"""
Experiment configuration data models for the RIFF CLI.

An ExperimentConfig is read from a JSON file (see ``riff config init``),
overridden by command-line flags and converted to the back-end types
(SplitSpec, BudgetConstraint, CellSettings) when a run starts.
"""

import hashlib
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional

from riff.cli.utils.errors import ConfigurationError
from riff.cli.utils.validation import (
    validate_budget_metric,
    validate_categorical_policy,
    validate_fraction,
    validate_grid,
    validate_model_kinds,
    validate_seeds,
)
from riff.src.config import (
    CONFIG_VERSION,
    DEFAULT_BUDGET_MAX,
    DEFAULT_MIN_LEAF,
    DEFAULT_POSITIVE_RATE,
    DEFAULT_RUNS_DIR,
    DEFAULT_SAMPLE_RATIO,
    DEFAULT_SEEDS,
    DEFAULT_SPLIT_GRID,
    DEFAULT_TAU,
)
from riff.src.utils import file_manager


def _known_fields(cls, data: dict, section: str) -> dict:
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigurationError(f"Unknown {section} setting(s): {', '.join(unknown)}")
    return data


@dataclass
class DatasetConfig:
    """
    Where the data lives and how its columns are read.

    Attributes:
        path: CSV file with a header row
        label_column: 0/1 label column
        order_column: Column ordering rows in time (temporal splits)
        id_column: Column with stable integer row ids
        categorical_policy: ``ordinal`` or ``onehot``
        drop_columns: Columns excluded from the features
    """
    path: str = ""
    label_column: str = "label"
    order_column: Optional[str] = None
    id_column: Optional[str] = None
    categorical_policy: str = "ordinal"
    drop_columns: List[str] = field(default_factory=list)

    def validate(self):
        if not self.path:
            raise ConfigurationError("dataset.path is required")
        if not self.label_column:
            raise ConfigurationError("dataset.label_column cannot be empty")
        validate_categorical_policy(self.categorical_policy)

    @classmethod
    def from_dict(cls, data: dict) -> 'DatasetConfig':
        return cls(**_known_fields(cls, data, "dataset"))


@dataclass
class SplitConfig:
    """Train/validation/test proportions; ``mode`` is ``temporal`` or ``random``."""
    train_fraction: float = 0.6
    validation_fraction: float = 0.2
    test_fraction: float = 0.2
    mode: str = "random"
    seed: int = 0

    def to_spec(self):
        from riff.src.be.data.dataset import SplitSpec
        return SplitSpec.build(**asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> 'SplitConfig':
        return cls(**_known_fields(cls, data, "split"))


@dataclass
class ExperimentConfig:
    """
    Full experiment protocol.

    Attributes:
        dataset: Data source settings
        split: Train/validation/test split
        sample_ratio: Share of the training rows drawn for each of the induction
            and selection sets (or for both together with ``sample_ratio_mode=union``)
        sample_ratio_mode: ``per-subset`` or ``union``
        target_positive_rate: Positive rate of the induction and selection sets
        budget_metric: ``fpr`` or ``alert-rate``
        budget_max: Budget limit in (0, 1]
        models: Model kinds to run (cart, figs, figu)
        min_leaf: Minimum rows per leaf
        tau: FIGU precision threshold
        grid: Split budgets searched on validation, strictly increasing
        seeds: Master seeds, one cell per (seed, model)
        filter_low_precision: Drop candidate leaves below the induction base rate
        resample_per_grid_value: Redraw induction/selection sets for every grid value
        output_dir: Root directory for run artifacts
        jobs: Worker processes for (seed, model) cells
    """
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    sample_ratio: float = DEFAULT_SAMPLE_RATIO
    sample_ratio_mode: str = "per-subset"
    target_positive_rate: float = DEFAULT_POSITIVE_RATE
    budget_metric: str = "fpr"
    budget_max: float = DEFAULT_BUDGET_MAX
    models: List[str] = field(default_factory=lambda: ["cart", "figs", "figu"])
    min_leaf: int = DEFAULT_MIN_LEAF
    tau: float = DEFAULT_TAU
    grid: List[int] = field(default_factory=lambda: list(DEFAULT_SPLIT_GRID))
    seeds: List[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    filter_low_precision: bool = False
    resample_per_grid_value: bool = False
    output_dir: str = DEFAULT_RUNS_DIR
    jobs: int = 1

    def validate(self):
        """
        Validate all configuration fields.

        Raises:
            ConfigurationError: If validation fails
        """
        self.dataset.validate()
        self.split.to_spec()
        validate_fraction("sample_ratio", self.sample_ratio)
        validate_fraction("target_positive_rate", self.target_positive_rate, allow_one=False)
        validate_fraction("budget_max", self.budget_max)
        validate_fraction("tau", self.tau, allow_zero=True)
        validate_budget_metric(self.budget_metric)
        validate_model_kinds(self.models)
        validate_grid(self.grid)
        validate_seeds(self.seeds)
        if self.sample_ratio_mode not in ("per-subset", "union"):
            raise ConfigurationError(
                f"sample_ratio_mode must be 'per-subset' or 'union', got '{self.sample_ratio_mode}'"
            )
        if self.min_leaf < 1:
            raise ConfigurationError(f"min_leaf must be at least 1, got {self.min_leaf}")
        if self.jobs < 1:
            raise ConfigurationError(f"jobs must be at least 1, got {self.jobs}")

    def to_dict(self) -> dict:
        """Convert to dictionary."""
        return {"version": CONFIG_VERSION, **asdict(self)}

    @classmethod
    def from_dict(cls, data: dict) -> 'ExperimentConfig':
        """
        Create ExperimentConfig from dictionary.

        Args:
            data: Configuration dictionary (``version`` is optional)

        Returns:
            ExperimentConfig instance

        Raises:
            ConfigurationError: Unknown keys or wrong version
        """
        data = dict(data)
        version = data.pop("version", CONFIG_VERSION)
        if version != CONFIG_VERSION:
            raise ConfigurationError(f"Unsupported config version '{version}' (expected {CONFIG_VERSION})")
        _known_fields(cls, data, "experiment")
        dataset = DatasetConfig.from_dict(data.pop("dataset", {}))
        split = SplitConfig.from_dict(data.pop("split", {}))
        return cls(dataset=dataset, split=split, **data)

    def manifest_items(self) -> Dict[str, str]:
        """Effective settings as flat ``config.<section>.<field>`` entries; lists are comma-joined."""
        items: Dict[str, str] = {}

        def flatten(prefix: str, value: Any):
            if isinstance(value, dict):
                for key in sorted(value):
                    flatten(f"{prefix}.{key}", value[key])
            elif isinstance(value, list):
                items[prefix] = ",".join(str(v) for v in value)
            else:
                items[prefix] = "" if value is None else str(value)

        for key, value in sorted(asdict(self).items()):
            flatten(f"config.{key}", value)
        return items

    def run_id(self) -> str:
        """Content hash of the settings that determine results (output_dir and jobs excluded)."""
        canonical = self.to_dict()
        canonical.pop("output_dir")
        canonical.pop("jobs")
        return hashlib.sha256(file_manager.dumps_json(canonical).encode("utf-8")).hexdigest()[:12]

    def budget(self):
        from riff.src.be.selection.models import BudgetConstraint
        return BudgetConstraint.build(self.budget_metric, self.budget_max)

    def cell_settings(self, model_kind: str):
        """Back-end settings for the cells of ``model_kind``."""
        from riff.src.be.pipeline import CellSettings
        try:
            return CellSettings(
                model_kind=model_kind,
                grid=self.grid,
                budget=self.budget(),
                sample_ratio=self.sample_ratio,
                target_positive_rate=self.target_positive_rate,
                ratio_mode=self.sample_ratio_mode,
                min_leaf=self.min_leaf,
                tau=self.tau,
                filter_low_precision=self.filter_low_precision,
                resample_per_grid_value=self.resample_per_grid_value,
            )
        except ValueError as e:
            raise ConfigurationError(f"Invalid experiment settings: {e}")

    def apply_overrides(self, overrides: Dict[str, Any]) -> 'ExperimentConfig':
        """Set every non-None override; dotted keys address nested sections."""
        for key, value in overrides.items():
            if value is None or value == () or value == []:
                continue
            target = self
            *parents, name = key.split(".")
            for parent in parents:
                target = getattr(target, parent)
            if not hasattr(target, name):
                raise ConfigurationError(f"Unknown setting '{key}'")
            setattr(target, name, list(value) if isinstance(value, tuple) else value)
        return self
