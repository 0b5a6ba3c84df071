"""
Export command: human-readable rule listing.
"""

import sys
from pathlib import Path
from typing import Optional

import click

from riff.cli.utils.errors import RiffError, handle_error
from riff.cli.utils.fs import write_text_artifact
from riff.cli.utils.logging import create_logger
from riff.cli.utils.validation import validate_input_file
from riff.src.be.rules.io import export_rules_text, load_rules


@click.command(name="export-rules")
@click.option("--rules", "rules_file", type=str, required=True, help="Rule-set file")
@click.option("--out", "-o", type=click.Path(), default=None, help="Text file to write (default: stdout)")
def export_rules_command(rules_file: str, out: Optional[str]):
    """
    Print one 'IF ... THEN FLAG' line per rule.

    Examples:

    \b
    $ riff export-rules --rules runs/3f2a9c1b7d4e/0/figu/selected_rules.json
    """
    logger = create_logger()
    try:
        rule_set, probability = load_rules(validate_input_file(rules_file))
        text = export_rules_text(rule_set.rules)
        if out:
            write_text_artifact(Path(out), text)
            logger.wrote(f"{len(rule_set)} rules", out)
        else:
            click.echo(text, nl=False)
            if probability is not None and probability < 1.0 and rule_set.rules:
                click.echo(f"# last rule fires with probability {probability:.4f}")

    except RiffError as e:
        logger.error(e.message)
        sys.exit(e.exit_code)
    except Exception as e:
        sys.exit(handle_error(e))
