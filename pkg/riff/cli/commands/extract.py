"""
Extract command: one candidate rule per model leaf.
"""

import sys
from pathlib import Path
from typing import Optional

import click

from riff.cli.utils.errors import RiffError, handle_error
from riff.cli.utils.logging import create_logger
from riff.cli.utils.validation import validate_fraction, validate_input_file
from riff.src.be.rules.extraction import extract_rules
from riff.src.be.rules.io import save_rules
from riff.src.be.trees.model import load_model


@click.command(name="extract")
@click.option("--model-file", type=str, required=True, help="Model file written by 'riff train'")
@click.option("--out", "-o", type=click.Path(), required=True, help="Rule-set file to write (JSON)")
@click.option("--min-precision", type=float, default=None,
              help="Drop leaves whose training precision is below this value")
@click.option("--verbose", "-v", is_flag=True, help="Show the extracted rules")
def extract_command(model_file: str, out: str, min_precision: Optional[float], verbose: bool):
    """
    Turn every leaf of a trained model into a candidate rule.

    Examples:

    \b
    $ riff extract --model-file model.json --out rules.json
    """
    logger = create_logger(verbose=verbose)
    try:
        model = load_model(validate_input_file(model_file))
        if min_precision is not None:
            min_precision = validate_fraction("min_precision", min_precision, allow_zero=True)

        rule_set = extract_rules(model, min_precision=min_precision)
        path = save_rules(Path(out).expanduser(), rule_set)

        logger.result(f"{len(rule_set)} candidate rules from {model.n_trees} tree(s)")
        for rule in rule_set.rules:
            logger.detail(rule.render())
        logger.wrote("Rules", path)

    except RiffError as e:
        logger.error(e.message)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        sys.exit(handle_error(e, verbose))
