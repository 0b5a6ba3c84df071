"""
Evaluate command: recall at the budget of a rule set, a model or external scores.
"""

import sys
from pathlib import Path
from typing import Optional

import click

from riff.cli.utils.errors import ConfigurationError, RiffError, handle_error
from riff.cli.utils.logging import create_logger
from riff.cli.utils.validation import validate_input_file
from riff.src.be.data.loader import load_split
from riff.src.be.evaluation.metrics import evaluate_model
from riff.src.be.evaluation.models import MetricsReport
from riff.src.be.pipeline import evaluate_external, evaluate_external_scores
from riff.src.be.selection.models import BudgetConstraint
from riff.src.be.trees.model import load_model
from riff.src.config import DEFAULT_BUDGET_MAX
from riff.src.utils import file_manager


def _display_report(report: MetricsReport):
    click.echo()
    click.secho(f"{report.configuration} on {report.split_name}", fg="blue", bold=True)
    click.echo(f"  Recall at {report.budget_metric.value} <= {report.budget_max:g}: {report.recall_at_budget:.4f}")
    click.echo(f"  {report.budget_metric.value}: {report.budget_metric_value:.6g}")
    if report.rule_count is not None:
        click.echo(f"  Rules: {report.rule_count}")
    if report.conservative_recall is not None:
        click.echo(f"  Conservative recall: {report.conservative_recall:.4f}")
    if report.last_rule_probability is not None:
        click.echo(f"  Last rule probability: {report.last_rule_probability:.4f}")


@click.command(name="evaluate")
@click.option("--data", type=str, required=True, help="Evaluation split CSV")
@click.option("--label", "label_column", type=str, default="label", show_default=True, help="Label column")
@click.option("--rules", "rules_file", type=str, default=None, help="Rule-set file (selected or hand-written)")
@click.option("--model-file", type=str, default=None, help="Model file: evaluate its raw scores")
@click.option("--scores", "scores_file", type=str, default=None, help="CSV with row_id,score columns")
@click.option("--budget-metric", type=click.Choice(["fpr", "alert-rate"]), default="fpr", show_default=True)
@click.option("--budget-max", type=float, default=DEFAULT_BUDGET_MAX, show_default=True, help="Budget limit")
@click.option("--split-name", type=str, default=None, help="Split label in the report (default: file stem)")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON")
@click.option("--verbose", "-v", is_flag=True, help="Show detailed information")
def evaluate_command(
    data: str,
    label_column: str,
    rules_file: Optional[str],
    model_file: Optional[str],
    scores_file: Optional[str],
    budget_metric: str,
    budget_max: float,
    split_name: Optional[str],
    as_json: bool,
    verbose: bool,
):
    """
    Report recall at the budget on one split.

    Exactly one of --rules, --model-file or --scores is required.

    Examples:

    \b
    # Expert rules
    $ riff evaluate --data splits/test.csv --rules expert_rules.json

    \b
    # Raw model baseline at a 5% alert rate
    $ riff evaluate --data splits/test.csv --model-file model.json \\
        --budget-metric alert-rate --budget-max 0.05
    """
    logger = create_logger(verbose=verbose)
    try:
        sources = [s for s in (rules_file, model_file, scores_file) if s]
        if len(sources) != 1:
            raise ConfigurationError("Pass exactly one of --rules, --model-file or --scores")

        budget = BudgetConstraint.build(budget_metric, budget_max)
        data_path = validate_input_file(data)
        ds = load_split(data_path, label_column)
        split_name = split_name or data_path.stem

        if rules_file:
            report = evaluate_external(validate_input_file(rules_file), ds, budget, split_name)
        elif model_file:
            report = evaluate_model(load_model(validate_input_file(model_file)), ds, budget, split_name)
        else:
            report = evaluate_external_scores(Path(scores_file), ds, budget, split_name)

        if as_json:
            click.echo(file_manager.dumps_json(report.model_dump(mode="json")), nl=False)
        else:
            _display_report(report)

    except RiffError as e:
        logger.error(e.message)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        sys.exit(handle_error(e, verbose))
