"""
Select command: greedy rule selection on a selection set.
"""

import sys
from pathlib import Path

import click

from riff.cli.utils.errors import RiffError, handle_error
from riff.cli.utils.fs import prepare_output_dir
from riff.cli.utils.logging import create_logger
from riff.cli.utils.validation import validate_input_file
from riff.src.be.data.loader import load_split
from riff.src.be.rules.io import load_rules, save_rules
from riff.src.be.rules.models import CandidateRuleSet
from riff.src.be.selection.greedy import greedy_select
from riff.src.be.selection.io import save_selection
from riff.src.be.selection.models import BudgetConstraint
from riff.src.config import DEFAULT_BUDGET_MAX, SELECTED_RULES_FILENAME, SELECTION_FILENAME


@click.command(name="select")
@click.option("--rules", "rules_file", type=str, required=True, help="Candidate rule file")
@click.option("--data", type=str, required=True, help="Selection set CSV")
@click.option("--label", "label_column", type=str, default="label", show_default=True, help="Label column")
@click.option("--budget-metric", type=click.Choice(["fpr", "alert-rate"]), default="fpr", show_default=True)
@click.option("--budget-max", type=float, default=DEFAULT_BUDGET_MAX, show_default=True, help="Budget limit")
@click.option("--out", "-o", type=click.Path(), required=True, help="Output directory")
@click.option("--verbose", "-v", is_flag=True, help="Show the selection trace")
def select_command(
    rules_file: str,
    data: str,
    label_column: str,
    budget_metric: str,
    budget_max: float,
    out: str,
    verbose: bool,
):
    """
    Pick rules by precision until the budget is reached.

    Writes selection.json (trace and last rule probability) and
    selected_rules.json, which 'riff evaluate --rules' accepts.

    Examples:

    \b
    $ riff select --rules rules.json --data splits/selection.csv --budget-max 0.01 --out selected/
    """
    logger = create_logger(verbose=verbose)
    try:
        budget = BudgetConstraint.build(budget_metric, budget_max)
        candidates, _ = load_rules(validate_input_file(rules_file))
        ds = load_split(validate_input_file(data), label_column)

        result = greedy_select(candidates, ds, budget)

        out_dir = prepare_output_dir(Path(out), "selection")
        save_selection(out_dir / SELECTION_FILENAME, result)
        selected = CandidateRuleSet(rules=result.ordered_rules, source_model_digest=candidates.source_model_digest)
        save_rules(out_dir / SELECTED_RULES_FILENAME, selected, result.last_rule_probability)

        for step in result.step_trace:
            logger.detail(
                f"step {step.step}: candidate {step.candidate_index} precision {step.precision:.4f} "
                f"tpr {step.tpr:.4f} {budget.metric.value} {step.budget_value:.6g}"
            )
        if result.terminated_early:
            logger.warning(f"Candidates exhausted before reaching {budget.describe()}")
        logger.result(
            f"Selected {result.rule_count} of {len(candidates)} rules; "
            f"last rule fires with probability {result.last_rule_probability:.4f}"
        )
        logger.wrote("Selection", out_dir)

    except RiffError as e:
        logger.error(e.message)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        sys.exit(handle_error(e, verbose))
