"""
Split command: train/validation/test CSVs (and optionally the induction and
selection subsets) for the stand-alone commands.
"""

import sys
from pathlib import Path
from typing import Optional

import click

from riff.cli.config_manager import ConfigManager
from riff.cli.utils.errors import RiffError, handle_error
from riff.cli.utils.fs import prepare_output_dir
from riff.cli.utils.logging import create_logger
from riff.cli.utils.validation import parse_fractions, validate_fraction
from riff.src.be.data.loader import load_csv, write_split, write_split_manifest
from riff.src.be.data.sampling import make_induction_selection, split_dataset
from riff.src.config import SPLIT_FILENAMES, derive_seed


@click.command(name="split")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Experiment config file")
@click.option("--data", type=click.Path(), help="Input CSV (overrides dataset.path)")
@click.option("--label", "label_column", type=str, help="Label column (default: label)")
@click.option("--order-column", type=str, help="Column ordering rows in time")
@click.option("--id-column", type=str, help="Column with stable integer row ids")
@click.option("--categorical-policy", type=click.Choice(["ordinal", "onehot"]), help="Encoding of non-numeric columns")
@click.option("--mode", type=click.Choice(["temporal", "random"]), help="Row assignment mode")
@click.option("--fractions", type=str, help="Train,validation,test fractions (e.g. 0.6,0.2,0.2)")
@click.option("--seed", type=int, help="Seed of the random split and the subsets")
@click.option("--sample-ratio", type=float, help="Also write induction.csv and selection.csv at this ratio")
@click.option("--positive-rate", type=float, help="Positive rate of the induction/selection subsets")
@click.option("--out", "-o", type=click.Path(), required=True, help="Output directory")
@click.option("--verbose", "-v", is_flag=True, help="Show detailed progress")
def split_command(
    config_path: Optional[str],
    data: Optional[str],
    label_column: Optional[str],
    order_column: Optional[str],
    id_column: Optional[str],
    categorical_policy: Optional[str],
    mode: Optional[str],
    fractions: Optional[str],
    seed: Optional[int],
    sample_ratio: Optional[float],
    positive_rate: Optional[float],
    out: str,
    verbose: bool,
):
    """
    Split a labeled CSV into train/validation/test files.

    Examples:

    \b
    # Temporal 75/12.5/12.5 split ordered by a month column
    $ riff split --data baf.csv --label fraud_bool --order-column month \\
        --mode temporal --fractions 0.75,0.125,0.125 --out splits/

    \b
    # Random split plus induction/selection subsets
    $ riff split --config taiwan.json --sample-ratio 0.5 --out splits/
    """
    logger = create_logger(verbose=verbose, stages=3)
    try:
        config = ConfigManager().load(Path(config_path) if config_path else None)
        overrides = {
            "dataset.path": data,
            "dataset.label_column": label_column,
            "dataset.order_column": order_column,
            "dataset.id_column": id_column,
            "dataset.categorical_policy": categorical_policy,
            "split.mode": mode,
            "split.seed": seed,
        }
        if fractions:
            train_f, validation_f, test_f = parse_fractions(fractions)
            overrides.update({
                "split.train_fraction": train_f,
                "split.validation_fraction": validation_f,
                "split.test_fraction": test_f,
            })
        config.apply_overrides(overrides)
        config.dataset.validate()
        spec = config.split.to_spec()

        out_dir = prepare_output_dir(Path(out), "splits")

        logger.stage("Loading dataset...")
        dataset = config.dataset
        ds = load_csv(
            Path(dataset.path),
            label_column=dataset.label_column,
            order_column=dataset.order_column,
            categorical_policy=dataset.categorical_policy,
            id_column=dataset.id_column,
            drop_columns=dataset.drop_columns,
        )
        logger.result(f"{ds.n_rows} rows, {ds.n_features} features, {ds.n_positive} positive")

        logger.stage("Splitting...")
        train, validation, test = split_dataset(ds, spec)
        splits = {"train": train, "validation": validation, "test": test}

        extra = {"dataset": dataset.path, "dataset_digest": ds.digest()}
        if sample_ratio is not None:
            ratio = validate_fraction("sample_ratio", sample_ratio)
            rate = validate_fraction(
                "positive_rate",
                positive_rate if positive_rate is not None else config.target_positive_rate,
                allow_one=False,
            )
            induction, selection = make_induction_selection(
                train, ratio, rate, derive_seed(spec.seed, "subsample"), config.sample_ratio_mode
            )
            splits.update({"induction": induction, "selection": selection})
            extra.update({"sample_ratio": ratio, "positive_rate": rate})

        logger.stage("Writing files...")
        for name, part in splits.items():
            write_split(part, out_dir / SPLIT_FILENAMES[name], label_column=dataset.label_column)
            logger.result(f"{SPLIT_FILENAMES[name]}: {part.n_rows} rows ({part.n_positive} positive)")
        write_split_manifest(out_dir / "split_manifest.txt", spec, splits, extra)
        logger.wrote("Splits", out_dir)

    except RiffError as e:
        logger.error(e.message)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        sys.exit(handle_error(e, verbose))
