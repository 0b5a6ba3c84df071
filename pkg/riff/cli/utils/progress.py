"""
Progress indicator utilities for CLI.
"""

import time
from typing import Optional

import click


class ProgressTracker:
    """
    Progress tracker with stages.

    Stages:
    1. Load Dataset
    2. Split and Persist
    3. Experiment Cells
    4. Aggregate Report
    """

    STAGE_NAMES = {
        1: "Load Dataset",
        2: "Split and Persist",
        3: "Experiment Cells",
        4: "Aggregate Report",
    }

    def __init__(self, total_stages: int = 4, verbose: bool = False):
        """
        Initialize progress tracker.

        Args:
            total_stages: Number of stages
            verbose: Enable verbose output
        """
        self.total_stages = total_stages
        self.current_stage = 0
        self.start_time = time.time()
        self.verbose = verbose
        self.current_stage_start = self.start_time

    def start_stage(self, stage: int, description: Optional[str] = None):
        """
        Start a new stage.

        Args:
            stage: Stage number (1-4)
            description: Optional custom description
        """
        self.current_stage = stage
        self.current_stage_start = time.time()
        stage_name = description or self.STAGE_NAMES.get(stage, f"Stage {stage}")

        if self.verbose:
            click.secho(
                f"\n[{self._format_elapsed()}] Phase {stage}/{self.total_stages}: {stage_name}",
                fg="blue",
                bold=True,
            )
        else:
            click.secho(f"[{stage}/{self.total_stages}] {stage_name}", fg="blue", bold=True)

    def complete_stage(self, message: Optional[str] = None):
        """
        Complete current stage.

        Args:
            message: Optional completion message
        """
        if self.verbose:
            stage_time = time.time() - self.current_stage_start
            stage_name = self.STAGE_NAMES.get(self.current_stage, f"Stage {self.current_stage}")
            click.secho(f"[{self._format_elapsed()}]   {stage_name} complete ({stage_time:.1f}s)", fg="green")
            if message:
                click.echo(f"[{self._format_elapsed()}]   {message}")

    def _format_elapsed(self) -> str:
        """Format elapsed time."""
        elapsed = time.time() - self.start_time
        minutes = int(elapsed // 60)
        seconds = int(elapsed % 60)
        return f"{minutes:02d}:{seconds:02d}"


class CellProgressBar:
    """Counter for (seed, model) cells."""

    def __init__(self, total_cells: int, verbose: bool = False):
        self.total_cells = total_cells
        self.current_cell = 0
        self.verbose = verbose

    def update(self, label: str, status: str = "done"):
        """Advance by one cell."""
        self.current_cell += 1
        color = "green" if status == "done" else "red"
        if self.verbose:
            click.secho(f"  [{self.current_cell}/{self.total_cells}] {label}: {status}", fg=color)
        else:
            click.echo(f"\r  Cells: {self.current_cell}/{self.total_cells}", nl=False)
            if self.current_cell == self.total_cells:
                click.echo()
