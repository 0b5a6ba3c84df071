"""
Main CLI application for RIFF using Click framework.
"""

import sys

import click

from riff import __version__


@click.group()
@click.version_option(version=__version__, prog_name="RIFF CLI")
@click.pass_context
def cli(ctx):
    """
    RIFF: interpretable fraud-detection rules from tree models.

    Grows CART, FIGS or FIGU models on an induction set, turns their leaves
    into candidate rules and greedily selects rules by precision until a
    false-positive-rate or alert-rate budget is reached.
    """
    ctx.ensure_object(dict)


@cli.command()
def version():
    """Display version information."""
    click.echo(f"RIFF CLI v{__version__}")
    click.echo("Rule induction through tree models under a rate budget")


# Import commands
from riff.cli.commands.config import config_group
from riff.cli.commands.evaluate import evaluate_command
from riff.cli.commands.export_rules import export_rules_command
from riff.cli.commands.extract import extract_command
from riff.cli.commands.run import run_command
from riff.cli.commands.select import select_command
from riff.cli.commands.split import split_command
from riff.cli.commands.train import train_command

# Register commands
cli.add_command(config_group)
cli.add_command(split_command, name="split")
cli.add_command(train_command, name="train")
cli.add_command(extract_command, name="extract")
cli.add_command(select_command, name="select")
cli.add_command(evaluate_command, name="evaluate")
cli.add_command(run_command, name="run")
cli.add_command(export_rules_command, name="export-rules")


def main():
    """Entry point for the CLI."""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(130)
    except Exception as e:
        click.secho(f"\n✗ Unexpected error: {e}", fg="red", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
