"""
CLI adapter for the experiment protocol.

This adapter drives the back-end pipeline over every (seed, model) cell,
adds progress reporting and writes the run artifacts under
``<output_dir>/<run-id>/``.
"""

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from riff.cli.models.config import ExperimentConfig
from riff.cli.models.job import CellRecord, ExperimentJob, JobStatus
from riff.cli.utils.errors import InternalError, RiffError
from riff.cli.utils.fs import prepare_output_dir, read_text, write_manifest, write_text_artifact
from riff.cli.utils.progress import CellProgressBar, ProgressTracker
from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.data.loader import load_csv, write_split_manifest
from riff.src.be.data.sampling import split_dataset
from riff.src.be.evaluation.models import MetricsReport
from riff.src.be.evaluation.report import aggregate_runs, format_aggregate
from riff.src.be.pipeline import CellOutcome, run_cell
from riff.src.be.rules.io import save_rules
from riff.src.be.rules.models import CandidateRuleSet
from riff.src.be.selection.io import save_selection
from riff.src.be.trees.model import save_model
from riff.src.config import (
    AGGREGATE_JSON_FILENAME,
    AGGREGATE_TEXT_FILENAME,
    MANIFEST_FILENAME,
    MODEL_FILENAME,
    REPORT_FILENAME,
    RULES_FILENAME,
    SELECTED_RULES_FILENAME,
    SELECTION_FILENAME,
)
from riff.src.utils import file_manager

logger = logging.getLogger(__name__)

CellPayload = Tuple[int, str, Dict[str, Any], LabeledDataset, LabeledDataset, LabeledDataset, str]


def write_cell_artifacts(outcome: CellOutcome, cell_dir: Path) -> List[str]:
    """Persist model, candidates, selection, selected rules and report of one cell."""
    file_manager.ensure_directory(str(cell_dir))
    save_model(cell_dir / MODEL_FILENAME, outcome.model)
    save_rules(cell_dir / RULES_FILENAME, outcome.candidates)
    save_selection(cell_dir / SELECTION_FILENAME, outcome.selection)
    selected = CandidateRuleSet(
        rules=outcome.selection.ordered_rules,
        source_model_digest=outcome.candidates.source_model_digest,
    )
    save_rules(cell_dir / SELECTED_RULES_FILENAME, selected, outcome.selection.last_rule_probability)
    file_manager.save_json(
        {
            "seed": outcome.seed,
            "model_kind": outcome.model_kind.value,
            "chosen_max_splits": outcome.chosen_max_splits,
            "test": outcome.test_report.model_dump(mode="json"),
            "baseline_max_splits": outcome.baseline_max_splits,
            "baseline": outcome.baseline_report.model_dump(mode="json"),
            "line_search": [point.model_dump(mode="json") for point in outcome.line_search],
            "induction_digest": outcome.induction_digest,
            "selection_digest": outcome.selection_digest,
        },
        str(cell_dir / REPORT_FILENAME),
    )
    return [MODEL_FILENAME, RULES_FILENAME, SELECTION_FILENAME, SELECTED_RULES_FILENAME, REPORT_FILENAME]


def _run_cell_job(payload: CellPayload) -> Dict[str, Any]:
    """
    Run and persist one cell; safe to call in a worker process.

    Failures are returned, not raised, so one cell never aborts the others.
    """
    seed, model_kind, config_data, train, validation, test, cell_dir = payload
    try:
        config = ExperimentConfig.from_dict(config_data)
        outcome = run_cell(train, validation, test, config.cell_settings(model_kind), seed)
        files = write_cell_artifacts(outcome, Path(cell_dir))
        return {
            "status": JobStatus.COMPLETED.value,
            "chosen_max_splits": outcome.chosen_max_splits,
            "test": outcome.test_report.model_dump(mode="json"),
            "baseline": outcome.baseline_report.model_dump(mode="json"),
            "files": files,
        }
    except RiffError as e:
        return {"status": JobStatus.FAILED.value, "error": e.message}
    except Exception as e:
        return {"status": JobStatus.FAILED.value, "error": f"{type(e).__name__}: {e}"}


class CLIExperimentRunner:
    """
    CLI adapter for the full protocol with progress reporting.

    This class wraps the back-end pipeline and adds CLI-specific features:
    progress tracking, back-end log routing, per-cell error isolation and
    artifact layout.
    """

    def __init__(self, config: ExperimentConfig, verbose: bool = False):
        """
        Initialize the runner.

        Args:
            config: Validated experiment configuration
            verbose: Enable verbose output
        """
        self.config = config
        self.verbose = verbose
        self.run_id = config.run_id()
        self.run_dir = Path(config.output_dir).expanduser() / self.run_id
        self.progress_tracker = ProgressTracker(total_stages=4, verbose=verbose)
        self.job = ExperimentJob(
            run_id=self.run_id,
            run_directory=str(self.run_dir),
            dataset_path=config.dataset.path,
        )

        self._configure_backend_logging()

    def _configure_backend_logging(self):
        """Configure backend logger for CLI use with colored output."""
        from riff.src.be.utils.logging_config import BACKEND_LOGGER_NAME, ColoredFormatter

        backend_logger = logging.getLogger(BACKEND_LOGGER_NAME)
        backend_logger.handlers.clear()

        if self.verbose:
            backend_logger.setLevel(logging.INFO)
            console_handler = logging.StreamHandler(sys.stdout)
            console_handler.setLevel(logging.INFO)
        else:
            # Hide INFO/DEBUG, keep warnings on stderr
            backend_logger.setLevel(logging.WARNING)
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(logging.WARNING)

        console_handler.setFormatter(ColoredFormatter())
        backend_logger.addHandler(console_handler)
        backend_logger.propagate = False

    def run(self) -> ExperimentJob:
        """
        Run every (seed, model) cell and write the aggregate report.

        Returns:
            The completed ExperimentJob (failed cells are recorded on it)

        Raises:
            RiffError: Loading or splitting the dataset failed
        """
        self.job.start()
        try:
            splits = self._load_and_split()
            payloads = self._payloads(*splits)

            self.progress_tracker.start_stage(3, f"Experiment Cells ({len(payloads)})")
            results = self._execute(payloads)
            self.progress_tracker.complete_stage()

            self.progress_tracker.start_stage(4)
            self._aggregate(payloads, results)
            self.progress_tracker.complete_stage(f"Artifacts in {self.run_dir}")

            self.job.complete()
        except RiffError as e:
            self.job.fail(e.message)
            raise
        except Exception as e:
            self.job.fail(str(e))
            raise InternalError(f"Experiment failed: {e}")
        finally:
            self._write_manifest()
        return self.job

    def _load_and_split(self) -> Tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
        dataset = self.config.dataset
        self.progress_tracker.start_stage(1)
        ds = load_csv(
            Path(dataset.path).expanduser(),
            label_column=dataset.label_column,
            order_column=dataset.order_column,
            categorical_policy=dataset.categorical_policy,
            id_column=dataset.id_column,
            drop_columns=dataset.drop_columns,
        )
        self.progress_tracker.complete_stage(f"{ds.n_rows} rows, {ds.n_positive} positive")

        self.progress_tracker.start_stage(2)
        spec = self.config.split.to_spec()
        train, validation, test = split_dataset(ds, spec)
        prepare_output_dir(self.run_dir, "run artifacts")
        file_manager.save_json(self.config.to_dict(), str(self.run_dir / "config.json"))
        write_split_manifest(
            self.run_dir / "split_manifest.txt",
            spec,
            {"train": train, "validation": validation, "test": test},
            {"dataset_digest": ds.digest()},
        )
        self.job.files_generated.extend(["config.json", "split_manifest.txt"])
        self.progress_tracker.complete_stage(
            f"train {train.n_rows}, validation {validation.n_rows}, test {test.n_rows}"
        )
        return train, validation, test

    def _payloads(self, train, validation, test) -> List[CellPayload]:
        config_data = self.config.to_dict()
        payloads = []
        for seed in self.config.seeds:
            for model_kind in self.config.models:
                cell_dir = self.run_dir / str(seed) / model_kind
                payloads.append((seed, model_kind, config_data, train, validation, test, str(cell_dir)))
                self.job.cells.append(CellRecord(seed=seed, model_kind=model_kind, artifact_dir=str(cell_dir)))
        return payloads

    def _execute(self, payloads: List[CellPayload]) -> List[Dict[str, Any]]:
        """Results come back in payload order whatever the worker count."""
        bar = CellProgressBar(len(payloads), verbose=self.verbose)
        results: List[Dict[str, Any]] = []
        if self.config.jobs > 1 and len(payloads) > 1:
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                for payload, result in zip(payloads, pool.map(_run_cell_job, payloads)):
                    bar.update(f"seed {payload[0]} {payload[1]}", "done" if result.get("error") is None else "failed")
                    results.append(result)
        else:
            for payload in payloads:
                result = _run_cell_job(payload)
                bar.update(f"seed {payload[0]} {payload[1]}", "done" if result.get("error") is None else "failed")
                results.append(result)
        return results

    def _aggregate(self, payloads: List[CellPayload], results: List[Dict[str, Any]]):
        reports: List[MetricsReport] = []
        for payload, record, result in zip(payloads, self.job.cells, results):
            relative = Path(payload[6]).relative_to(self.run_dir)
            if result["status"] == JobStatus.FAILED.value:
                record.fail(result["error"])
                logger.warning(f"Cell seed={record.seed} model={record.model_kind} failed: {result['error']}")
                continue
            record.status = JobStatus.COMPLETED
            test_report = MetricsReport.model_validate(result["test"])
            record.chosen_max_splits = result["chosen_max_splits"]
            record.test_recall = test_report.recall_at_budget
            record.rule_count = test_report.rule_count
            reports.extend([test_report, MetricsReport.model_validate(result["baseline"])])
            self.job.files_generated.extend(str(relative / name) for name in result["files"])

        if not reports:
            logger.warning("No cell completed; aggregate report skipped")
            return
        aggregate = aggregate_runs(reports)
        file_manager.save_json(aggregate.model_dump(mode="json"), str(self.run_dir / AGGREGATE_JSON_FILENAME))
        write_text_artifact(self.run_dir / AGGREGATE_TEXT_FILENAME, format_aggregate(aggregate))
        self.job.files_generated.extend([AGGREGATE_JSON_FILENAME, AGGREGATE_TEXT_FILENAME])

    def _write_manifest(self):
        """Timestamps live only here, so every other artifact is reproducible byte for byte."""
        if not self.run_dir.exists():
            return
        entries = self.job.manifest_entries()
        entries.update({
            "seeds": ",".join(str(s) for s in self.config.seeds),
            "models": ",".join(self.config.models),
            "grid": ",".join(str(g) for g in self.config.grid),
            "budget": self.config.budget().describe(),
        })
        entries.update(self.config.manifest_items())
        write_manifest(self.run_dir / MANIFEST_FILENAME, entries)

    @property
    def aggregate_text(self) -> Optional[str]:
        path = self.run_dir / AGGREGATE_TEXT_FILENAME
        return read_text(path) if path.exists() else None


def run_pipeline(config: ExperimentConfig, verbose: bool = False) -> ExperimentJob:
    """Run the full protocol for a validated ``config``."""
    return CLIExperimentRunner(config, verbose=verbose).run()
