"""
Console output for riff commands: numbered stages, stage results, written
artifacts, warnings and errors.
"""

import logging
import sys
import time
from pathlib import Path
from typing import Union

import click

from riff.src.be.utils.logging_config import setup_logging


class CLILogger:
    """
    Messages of one command invocation.

    A command that declares ``stages`` gets ``[k/n]`` prefixes from
    :meth:`stage`; detail lines only show with ``--verbose``. Warnings and
    errors go to stderr.
    """

    def __init__(self, verbose: bool = False, stages: int = 0):
        self.verbose = verbose
        self.stages = stages
        self._stage = 0
        self._started = time.monotonic()

    def stage(self, message: str):
        """Announce the next stage."""
        self._stage += 1
        prefix = f"[{self._stage}/{self.stages}]" if self.stages else "->"
        click.secho(f"{prefix} {message}", fg="blue", bold=True)

    def result(self, message: str):
        """Outcome of the current stage."""
        click.secho(f"  {message}", fg="green")

    def detail(self, message: str):
        if self.verbose:
            click.secho(f"  [{self.elapsed()}] {message}", fg="cyan", dim=True)

    def wrote(self, what: str, path: Union[str, Path]):
        """Where an artifact (model, rules, selection, splits) ended up."""
        click.echo(f"{what} written to {path}")

    def warning(self, message: str):
        click.secho(f"Warning: {message}", fg="yellow", err=True)

    def error(self, message: str):
        click.secho(f"Error: {message}", fg="red", err=True)

    def elapsed(self) -> str:
        minutes, seconds = divmod(int(time.monotonic() - self._started), 60)
        return f"{minutes}m {seconds}s" if minutes else f"{seconds}s"


def create_logger(verbose: bool = False, stages: int = 0) -> CLILogger:
    """
    CLI logger for one command; also routes back-end records to stderr
    (INFO with ``--verbose``, WARNING otherwise).
    """
    # stdout is reserved for command output such as --json reports
    setup_logging(level=logging.INFO if verbose else logging.WARNING, stream=sys.stderr)
    return CLILogger(verbose=verbose, stages=stages)
