"""
Validation utilities for CLI inputs and configuration.
"""

from pathlib import Path
from typing import List, Sequence

from riff.cli.utils.errors import ConfigurationError, FileSystemError

MODEL_KINDS = ("cart", "figs", "figu")
BUDGET_METRICS = ("fpr", "alert-rate")
CATEGORICAL_POLICIES = ("ordinal", "onehot")


def validate_fraction(name: str, value: float, allow_zero: bool = False, allow_one: bool = True) -> float:
    """
    Validate a proportion.

    Args:
        name: Setting name used in the error message
        value: Value to check
        allow_zero: Accept 0
        allow_one: Accept 1

    Returns:
        The value as float

    Raises:
        ConfigurationError: If the value is out of range
    """
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{name} must be a number, got {value!r}")
    low_ok = value >= 0.0 if allow_zero else value > 0.0
    high_ok = value <= 1.0 if allow_one else value < 1.0
    if not (low_ok and high_ok):
        interval = f"{'[' if allow_zero else '('}0, 1{']' if allow_one else ')'}"
        raise ConfigurationError(f"{name} must be in {interval}, got {value}")
    return value


def parse_grid(text: str) -> List[int]:
    """Parse ``"10,20,30"`` into a validated split-budget grid."""
    try:
        grid = [int(item.strip()) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ConfigurationError(f"Grid must be a comma-separated list of integers, got '{text}'")
    return validate_grid(grid)


def parse_fractions(text: str) -> List[float]:
    """Parse ``"0.6,0.2,0.2"`` into train/validation/test fractions."""
    try:
        values = [float(item) for item in text.split(",")]
    except ValueError:
        raise ConfigurationError(f"Fractions must be three comma-separated numbers, got '{text}'")
    if len(values) != 3:
        raise ConfigurationError(f"Expected train,validation,test fractions, got {len(values)} values")
    return values


def validate_grid(grid: Sequence[int]) -> List[int]:
    grid = list(grid)
    if not grid:
        raise ConfigurationError("Grid of split budgets cannot be empty")
    if any(not isinstance(value, int) or value < 1 for value in grid):
        raise ConfigurationError(f"Grid values must be positive integers, got {grid}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigurationError(f"Grid must be strictly increasing, got {grid}")
    return grid


def validate_seeds(seeds: Sequence[int]) -> List[int]:
    seeds = list(seeds)
    if not seeds:
        raise ConfigurationError("At least one seed is required")
    if len(set(seeds)) != len(seeds):
        raise ConfigurationError(f"Seeds must be unique, got {seeds}")
    if any(not isinstance(seed, int) or seed < 0 for seed in seeds):
        raise ConfigurationError(f"Seeds must be non-negative integers, got {seeds}")
    return seeds


def validate_model_kinds(models: Sequence[str]) -> List[str]:
    models = list(models)
    if not models:
        raise ConfigurationError("At least one model kind is required")
    unknown = [m for m in models if m not in MODEL_KINDS]
    if unknown:
        raise ConfigurationError(
            f"Unknown model kind(s): {', '.join(unknown)} (choose from {', '.join(MODEL_KINDS)})"
        )
    return models


def validate_budget_metric(metric: str) -> str:
    if metric not in BUDGET_METRICS:
        raise ConfigurationError(f"Budget metric must be one of {', '.join(BUDGET_METRICS)}, got '{metric}'")
    return metric


def validate_categorical_policy(policy: str) -> str:
    if policy not in CATEGORICAL_POLICIES:
        raise ConfigurationError(
            f"Categorical policy must be one of {', '.join(CATEGORICAL_POLICIES)}, got '{policy}'"
        )
    return policy


def validate_input_file(path: str) -> Path:
    """
    Validate that an input file exists.

    Raises:
        FileSystemError: If the path is not a readable file
    """
    resolved = Path(path).expanduser()
    if not resolved.is_file():
        raise FileSystemError(f"File not found: {resolved}")
    return resolved
