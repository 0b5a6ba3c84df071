"""
Experiment job data models.
"""

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional


class JobStatus(str, Enum):
    """Experiment job and cell status."""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class CellRecord:
    """
    Outcome of one (seed, model) cell.

    Attributes:
        seed: Master seed
        model_kind: cart, figs or figu
        status: Cell status
        error_message: Failure reason (if failed)
        chosen_max_splits: Grid value picked on validation
        test_recall: Expected test recall of the selected rule set
        rule_count: Selected rule count
        artifact_dir: Directory holding the cell's artifacts
    """
    seed: int
    model_kind: str
    status: JobStatus = JobStatus.PENDING
    error_message: Optional[str] = None
    chosen_max_splits: Optional[int] = None
    test_recall: Optional[float] = None
    rule_count: Optional[int] = None
    artifact_dir: Optional[str] = None

    def fail(self, error_message: str):
        self.status = JobStatus.FAILED
        self.error_message = error_message

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "model_kind": self.model_kind,
            "status": self.status.value,
            "error_message": self.error_message,
            "chosen_max_splits": self.chosen_max_splits,
            "test_recall": self.test_recall,
            "rule_count": self.rule_count,
            "artifact_dir": self.artifact_dir,
        }


@dataclass
class ExperimentJob:
    """
    A full protocol run.

    Attributes:
        run_id: Content hash of the configuration
        run_directory: runs/<run-id>
        dataset_path: Input CSV
        timestamp_start: Job start time
        timestamp_end: Job end time (if finished)
        status: Current job status
        error_message: Error message (if failed)
        cells: Per (seed, model) records
        files_generated: Artifact paths relative to the run directory
    """
    run_id: str = ""
    run_directory: str = ""
    dataset_path: str = ""
    timestamp_start: str = field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))
    timestamp_end: Optional[str] = None
    status: JobStatus = JobStatus.PENDING
    error_message: Optional[str] = None
    cells: List[CellRecord] = field(default_factory=list)
    files_generated: List[str] = field(default_factory=list)

    def start(self):
        """Mark job as started."""
        self.status = JobStatus.RUNNING
        self.timestamp_start = datetime.now().isoformat(timespec="seconds")

    def complete(self):
        """Mark job as completed (failed cells do not fail the job)."""
        self.status = JobStatus.COMPLETED
        self.timestamp_end = datetime.now().isoformat(timespec="seconds")

    def fail(self, error_message: str):
        """Mark job as failed."""
        self.status = JobStatus.FAILED
        self.error_message = error_message
        self.timestamp_end = datetime.now().isoformat(timespec="seconds")

    @property
    def failed_cells(self) -> List[CellRecord]:
        return [cell for cell in self.cells if cell.status is JobStatus.FAILED]

    def manifest_entries(self) -> Dict[str, Any]:
        """Flat key=value view for manifest.txt."""
        entries: Dict[str, Any] = {
            "run_id": self.run_id,
            "dataset": self.dataset_path,
            "status": self.status.value,
            "timestamp_start": self.timestamp_start,
            "timestamp_end": self.timestamp_end or "",
            "cells_total": len(self.cells),
            "cells_failed": len(self.failed_cells),
        }
        for cell in self.cells:
            key = f"cell.{cell.seed}.{cell.model_kind}"
            entries[key] = cell.status.value
            if cell.error_message:
                entries[f"{key}.error"] = cell.error_message.replace("\n", " ")
        return entries

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "run_id": self.run_id,
            "run_directory": self.run_directory,
            "dataset_path": self.dataset_path,
            "timestamp_start": self.timestamp_start,
            "timestamp_end": self.timestamp_end,
            "status": self.status.value,
            "error_message": self.error_message,
            "cells": [cell.to_dict() for cell in self.cells],
            "files_generated": self.files_generated,
        }
