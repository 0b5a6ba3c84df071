"""
Train command: grow one CART, FIGS or FIGU model under a split budget.
"""

import sys
from pathlib import Path

import click

from riff.cli.utils.errors import RiffError, handle_error
from riff.cli.utils.logging import create_logger
from riff.cli.utils.validation import validate_fraction, validate_input_file
from riff.src.be.data.loader import load_split
from riff.src.be.trees.growers import grow_model
from riff.src.be.trees.model import ModelKind, save_model
from riff.src.config import DEFAULT_MIN_LEAF, DEFAULT_TAU


@click.command(name="train")
@click.option("--data", type=str, required=True, help="Induction set CSV (as written by 'riff split')")
@click.option("--label", "label_column", type=str, default="label", show_default=True, help="Label column")
@click.option("--model", "model_kind", type=click.Choice(["cart", "figs", "figu"]), required=True, help="Model kind")
@click.option("--max-splits", type=click.IntRange(min=1), required=True, help="Total split budget")
@click.option("--min-leaf", type=click.IntRange(min=1), default=DEFAULT_MIN_LEAF, show_default=True,
              help="Minimum rows per leaf")
@click.option("--tau", type=float, default=DEFAULT_TAU, show_default=True, help="FIGU leaf precision threshold")
@click.option("--out", "-o", type=click.Path(), required=True, help="Model file to write (JSON)")
@click.option("--verbose", "-v", is_flag=True, help="Show detailed progress")
def train_command(
    data: str,
    label_column: str,
    model_kind: str,
    max_splits: int,
    min_leaf: int,
    tau: float,
    out: str,
    verbose: bool,
):
    """
    Grow a tree model on an induction set.

    Examples:

    \b
    $ riff train --data splits/induction.csv --model figu --max-splits 20 --out model.json
    """
    logger = create_logger(verbose=verbose)
    try:
        ds = load_split(validate_input_file(data), label_column)
        tau = validate_fraction("tau", tau, allow_zero=True)
        logger.detail(f"Training {model_kind} on {ds.n_rows} rows ({ds.n_positive} positive)")

        model = grow_model(ModelKind(model_kind), ds, max_splits, min_leaf, tau)
        path = save_model(Path(out).expanduser(), model)

        leaves = sum(len(tree.leaves()) for tree in model.trees)
        logger.result(
            f"{model_kind.upper()}: {model.total_splits} splits, {model.n_trees} tree(s), {leaves} leaves"
        )
        logger.wrote("Model", path)

    except RiffError as e:
        logger.error(e.message)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        sys.exit(handle_error(e, verbose))
