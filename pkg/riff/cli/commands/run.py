"""
Run command: the full experiment protocol.
"""

import sys
from pathlib import Path
from typing import Optional, Tuple

import click

from riff.cli.adapters.experiment_runner import CLIExperimentRunner
from riff.cli.config_manager import ConfigManager
from riff.cli.utils.errors import EXIT_DATA_ERROR, RiffError, handle_error
from riff.cli.utils.fs import prepare_output_dir
from riff.cli.utils.instructions import display_run_summary
from riff.cli.utils.logging import create_logger
from riff.cli.utils.validation import parse_fractions, parse_grid


@click.command(name="run")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Experiment config file")
@click.option("--data", type=click.Path(), help="Input CSV (overrides dataset.path)")
@click.option("--label", "label_column", type=str, help="Label column")
@click.option("--order-column", type=str, help="Column ordering rows in time")
@click.option("--id-column", type=str, help="Column with stable integer row ids")
@click.option("--drop-column", "drop_columns", type=str, multiple=True, help="Column excluded from the features (repeatable)")
@click.option("--categorical-policy", type=click.Choice(["ordinal", "onehot"]), help="Encoding of non-numeric columns")
@click.option("--split-mode", type=click.Choice(["temporal", "random"]), help="Row assignment mode of the split")
@click.option("--fractions", type=str, help="Train,validation,test fractions (e.g. 0.6,0.2,0.2)")
@click.option("--split-seed", type=int, help="Seed of the random split")
@click.option("--seed", "seeds", type=int, multiple=True, help="Master seed (repeatable)")
@click.option("--model", "models", type=click.Choice(["cart", "figs", "figu"]), multiple=True,
              help="Model kind (repeatable)")
@click.option("--budget-metric", type=click.Choice(["fpr", "alert-rate"]), help="Budget metric")
@click.option("--budget-max", type=float, help="Budget limit in (0, 1]")
@click.option("--grid", type=str, help="Comma-separated split budgets (e.g. 10,20,30,40,50)")
@click.option("--tau", type=float, help="FIGU leaf precision threshold")
@click.option("--min-leaf", type=int, help="Minimum rows per leaf")
@click.option("--sample-ratio", type=float, help="Share of train rows per induction/selection set")
@click.option("--positive-rate", type=float, help="Positive rate of the induction/selection sets")
@click.option("--sample-ratio-mode", type=click.Choice(["per-subset", "union"]),
              help="Apply the sample ratio to each subset or to both together")
@click.option("--resample-per-grid-value", is_flag=True, default=None,
              help="Redraw induction/selection sets for every grid value")
@click.option("--filter-low-precision", is_flag=True, default=None,
              help="Drop candidate leaves below the induction base rate")
@click.option("--out", "-o", type=click.Path(), help="Root directory for run artifacts")
@click.option("--jobs", "-j", type=int, help="Worker processes for (seed, model) cells")
@click.option("--verbose", "-v", is_flag=True, help="Show detailed progress and back-end logs")
def run_command(
    config_path: Optional[str],
    data: Optional[str],
    label_column: Optional[str],
    order_column: Optional[str],
    id_column: Optional[str],
    drop_columns: Tuple[str, ...],
    categorical_policy: Optional[str],
    split_mode: Optional[str],
    fractions: Optional[str],
    split_seed: Optional[int],
    seeds: Tuple[int, ...],
    models: Tuple[str, ...],
    budget_metric: Optional[str],
    budget_max: Optional[float],
    grid: Optional[str],
    tau: Optional[float],
    min_leaf: Optional[int],
    sample_ratio: Optional[float],
    positive_rate: Optional[float],
    sample_ratio_mode: Optional[str],
    resample_per_grid_value: Optional[bool],
    filter_low_precision: Optional[bool],
    out: Optional[str],
    jobs: Optional[int],
    verbose: bool,
):
    """
    Run split, subsample, train, extract, select, tune and evaluate across seeds.

    Every flag overrides the matching config field. Artifacts go to
    <out>/<run-id>/<seed>/<model>/ with an aggregate report at the run root.

    Examples:

    \b
    # Taiwan credit protocol from a config file
    $ riff run --config taiwan.json

    \b
    # Two seeds, FIGU only, 5% alert-rate budget, four workers
    $ riff run --config taiwan.json --seed 0 --seed 1 --model figu \\
        --budget-metric alert-rate --budget-max 0.05 --jobs 4
    """
    logger = create_logger(verbose=verbose, stages=2)
    try:
        logger.stage("Validating configuration...")
        overrides = {
            "dataset.path": data,
            "dataset.label_column": label_column,
            "dataset.order_column": order_column,
            "dataset.id_column": id_column,
            "dataset.drop_columns": drop_columns,
            "dataset.categorical_policy": categorical_policy,
            "split.mode": split_mode,
            "split.seed": split_seed,
            "seeds": seeds,
            "models": models,
            "budget_metric": budget_metric,
            "budget_max": budget_max,
            "grid": parse_grid(grid) if grid else None,
            "tau": tau,
            "min_leaf": min_leaf,
            "sample_ratio": sample_ratio,
            "target_positive_rate": positive_rate,
            "sample_ratio_mode": sample_ratio_mode,
            "resample_per_grid_value": resample_per_grid_value,
            "filter_low_precision": filter_low_precision,
            "output_dir": out,
            "jobs": jobs,
        }
        if fractions:
            train_f, validation_f, test_f = parse_fractions(fractions)
            overrides.update({
                "split.train_fraction": train_f,
                "split.validation_fraction": validation_f,
                "split.test_fraction": test_f,
            })
        config = ConfigManager().resolve(Path(config_path) if config_path else None, overrides)
        prepare_output_dir(Path(config.output_dir), "runs")
        logger.result(
            f"{len(config.seeds)} seed(s) x {len(config.models)} model(s), "
            f"grid {config.grid}, budget {config.budget().describe()}"
        )

        logger.stage("Running experiment...")
        runner = CLIExperimentRunner(config, verbose=verbose)
        job = runner.run()

        display_run_summary(job, runner.run_dir, runner.aggregate_text, logger.elapsed())
        if job.cells and len(job.failed_cells) == len(job.cells):
            logger.error("Every cell failed")
            sys.exit(EXIT_DATA_ERROR)

    except RiffError as e:
        logger.error(e.message)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        sys.exit(handle_error(e, verbose))
