"""
RIFF: rule induction for fraud detection from tree models.

This package provides a CLI tool that grows CART, FIGS or FIGU models,
extracts one rule per leaf and greedily selects rules under an FPR or
alert-rate budget.
"""

__version__ = "0.3.0"
__license__ = "MIT"

from riff.cli.main import cli

__all__ = ["cli", "__version__"]
