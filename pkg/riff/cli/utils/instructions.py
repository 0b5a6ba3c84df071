"""
Post-run summary.
"""

from pathlib import Path
from typing import Optional

import click

from riff.cli.models.job import ExperimentJob


def display_run_summary(
    job: ExperimentJob,
    run_dir: Path,
    aggregate_text: Optional[str] = None,
    elapsed: Optional[str] = None,
):
    """
    Display the aggregate table, failed cells and where the artifacts are.

    Args:
        job: Finished experiment job
        run_dir: runs/<run-id> directory
        aggregate_text: Rendered aggregate table, if any cell completed
        elapsed: Human-readable run time
    """
    click.echo()
    click.secho("Experiment complete", fg="green", bold=True)
    click.echo("━" * 40)
    if aggregate_text:
        click.echo()
        click.echo(aggregate_text.rstrip("\n"))

    failed = job.failed_cells
    if failed:
        click.echo()
        click.secho(f"{len(failed)} of {len(job.cells)} cells failed:", fg="yellow", bold=True)
        for cell in failed:
            click.secho(f"  seed {cell.seed} {cell.model_kind}: {cell.error_message}", fg="yellow")

    click.echo()
    click.echo(f"Run id:     {job.run_id}")
    click.echo(f"Artifacts:  {run_dir}")
    if elapsed:
        click.echo(f"Time:       {elapsed}")
    click.echo()
    click.echo("Inspect the selected rules of a cell with:")
    click.echo(f"  riff export-rules --rules {run_dir}/<seed>/<model>/selected_rules.json")
