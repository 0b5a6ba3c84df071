"""
End-to-end tests of the riff command line through click's CliRunner.
"""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from riff.cli.adapters.experiment_runner import run_pipeline
from riff.cli.main import cli
from riff.cli.models.config import ExperimentConfig
from riff.cli.models.job import JobStatus
from riff.cli.utils.errors import FileSystemError
from riff.cli.utils.fs import prepare_output_dir, read_text, write_manifest, write_text_artifact
from riff.cli.utils.logging import CLILogger
from riff.src.config import (
    AGGREGATE_JSON_FILENAME,
    MODEL_FILENAME,
    REPORT_FILENAME,
    RULES_FILENAME,
    SELECTED_RULES_FILENAME,
    SELECTION_FILENAME,
)

CELL_FILES = [MODEL_FILENAME, RULES_FILENAME, SELECTION_FILENAME, SELECTED_RULES_FILENAME, REPORT_FILENAME]


@pytest.fixture
def runner():
    return CliRunner()


def _run_args(csv: Path, out: Path, *extra: str):
    return [
        "run",
        "--data", str(csv),
        "--label", "is_fraud",
        "--seed", "0",
        "--seed", "1",
        "--model", "cart",
        "--model", "figu",
        "--grid", "2,4",
        "--budget-max", "0.1",
        "--sample-ratio", "0.5",
        "--out", str(out),
        *extra,
    ]


def _run_dir(out: Path) -> Path:
    run_dirs = [path for path in out.iterdir() if path.is_dir()]
    assert len(run_dirs) == 1
    return run_dirs[0]


def test_version(runner):
    result = runner.invoke(cli, ["version"])

    assert result.exit_code == 0
    assert "RIFF CLI v" in result.output


def test_config_init_validate_and_show(runner, tmp_path, fraud_csv):
    path = tmp_path / "experiment.json"

    init = runner.invoke(cli, ["config", "init", str(path), "--data", str(fraud_csv)])
    validate = runner.invoke(cli, ["config", "validate", "--config", str(path), "--check-data"])
    show = runner.invoke(cli, ["config", "show", "--config", str(path), "--json"])

    assert init.exit_code == 0
    assert validate.exit_code == 0, validate.output
    assert "Configuration is valid" in validate.output
    assert json.loads(show.stdout)["dataset"]["path"] == str(fraud_csv)


def test_config_init_refuses_to_overwrite(runner, tmp_path):
    path = tmp_path / "experiment.json"
    runner.invoke(cli, ["config", "init", str(path)])

    result = runner.invoke(cli, ["config", "init", str(path)])

    assert result.exit_code == 1


@pytest.mark.parametrize("content", ["{not json", '{"unknown_key": 1}', '{"budget_max": 0}'])
def test_invalid_config_exits_with_config_error(runner, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")

    result = runner.invoke(cli, ["config", "validate", "--config", str(path)])

    assert result.exit_code == 1


def test_run_writes_all_artifacts(runner, tmp_path, fraud_csv):
    out = tmp_path / "runs"

    result = runner.invoke(cli, _run_args(fraud_csv, out))

    assert result.exit_code == 0, result.output
    run_dir = _run_dir(out)
    for name in ["config.json", "split_manifest.txt", "manifest.txt", AGGREGATE_JSON_FILENAME]:
        assert (run_dir / name).is_file()
    for seed in ("0", "1"):
        for model in ("cart", "figu"):
            for name in CELL_FILES:
                assert (run_dir / seed / model / name).is_file()

    aggregate = json.loads((run_dir / AGGREGATE_JSON_FILENAME).read_text(encoding="utf-8"))
    configurations = {row["configuration"] for row in aggregate["rows"]}
    assert configurations == {"CART+RIFF", "CART", "FIGU+RIFF", "FIGU"}
    assert all(row["n"] == 2 for row in aggregate["rows"])


def test_run_is_byte_for_byte_reproducible(runner, tmp_path, fraud_csv):
    first = runner.invoke(cli, _run_args(fraud_csv, tmp_path / "a"))
    second = runner.invoke(cli, _run_args(fraud_csv, tmp_path / "b"))

    assert first.exit_code == 0 and second.exit_code == 0
    dir_a, dir_b = _run_dir(tmp_path / "a"), _run_dir(tmp_path / "b")
    assert dir_a.name == dir_b.name
    for cell in ("0/cart", "1/figu"):
        for name in CELL_FILES:
            assert (dir_a / cell / name).read_bytes() == (dir_b / cell / name).read_bytes()
    assert (dir_a / AGGREGATE_JSON_FILENAME).read_bytes() == (dir_b / AGGREGATE_JSON_FILENAME).read_bytes()


def test_parallel_run_matches_serial_run(runner, tmp_path, fraud_csv):
    serial = runner.invoke(cli, _run_args(fraud_csv, tmp_path / "serial", "--jobs", "1"))
    parallel = runner.invoke(cli, _run_args(fraud_csv, tmp_path / "parallel", "--jobs", "2"))

    assert serial.exit_code == 0 and parallel.exit_code == 0
    serial_dir, parallel_dir = _run_dir(tmp_path / "serial"), _run_dir(tmp_path / "parallel")
    assert (serial_dir / AGGREGATE_JSON_FILENAME).read_bytes() == (parallel_dir / AGGREGATE_JSON_FILENAME).read_bytes()


def test_run_with_missing_dataset_exits_with_data_error(runner, tmp_path):
    result = runner.invoke(cli, _run_args(tmp_path / "missing.csv", tmp_path / "runs"))

    assert result.exit_code == 2


def test_run_with_unknown_label_exits_with_schema_error(runner, tmp_path, fraud_csv):
    args = _run_args(fraud_csv, tmp_path / "runs")
    args[args.index("is_fraud")] = "no_such_column"

    result = runner.invoke(cli, args)

    assert result.exit_code == 1


def test_step_by_step_commands(runner, tmp_path, fraud_csv):
    splits = tmp_path / "splits"
    split = runner.invoke(cli, [
        "split", "--data", str(fraud_csv), "--label", "is_fraud",
        "--order-column", "month", "--mode", "temporal", "--fractions", "0.6,0.2,0.2",
        "--sample-ratio", "0.5", "--out", str(splits),
    ])
    assert split.exit_code == 0, split.output
    for name in ["train.csv", "validation.csv", "test.csv", "induction.csv", "selection.csv", "split_manifest.txt"]:
        assert (splits / name).is_file()

    model = tmp_path / "model.json"
    train = runner.invoke(cli, [
        "train", "--data", str(splits / "induction.csv"), "--label", "is_fraud",
        "--model", "figu", "--max-splits", "6", "--out", str(model),
    ])
    assert train.exit_code == 0, train.output

    rules = tmp_path / "rules.json"
    extract = runner.invoke(cli, ["extract", "--model-file", str(model), "--out", str(rules)])
    assert extract.exit_code == 0, extract.output

    selected = tmp_path / "selected"
    select = runner.invoke(cli, [
        "select", "--rules", str(rules), "--data", str(splits / "selection.csv"), "--label", "is_fraud",
        "--budget-max", "0.1", "--out", str(selected),
    ])
    assert select.exit_code == 0, select.output
    assert (selected / SELECTION_FILENAME).is_file()

    evaluate = runner.invoke(cli, [
        "evaluate", "--data", str(splits / "test.csv"), "--label", "is_fraud",
        "--rules", str(selected / SELECTED_RULES_FILENAME), "--budget-max", "0.1", "--json",
    ])
    assert evaluate.exit_code == 0, evaluate.output
    report = json.loads(evaluate.stdout)
    assert report["source"] == "external-rules"
    assert report["split_name"] == "test"
    assert 0.0 <= report["recall_at_budget"] <= 1.0

    baseline = runner.invoke(cli, [
        "evaluate", "--data", str(splits / "test.csv"), "--label", "is_fraud",
        "--model-file", str(model), "--json",
    ])
    assert baseline.exit_code == 0, baseline.output
    assert json.loads(baseline.stdout)["source"] == "model"

    export = runner.invoke(cli, ["export-rules", "--rules", str(selected / SELECTED_RULES_FILENAME)])
    assert export.exit_code == 0
    lines = [line for line in export.output.splitlines() if not line.startswith("#")]
    assert lines and all(line.startswith("IF ") and line.endswith(" THEN FLAG") for line in lines)


def test_evaluate_needs_exactly_one_source(runner, tmp_path, fraud_csv):
    result = runner.invoke(cli, ["evaluate", "--data", str(fraud_csv), "--label", "is_fraud"])

    assert result.exit_code == 1


def test_export_rules_from_hand_written_file(runner, tmp_path):
    path = tmp_path / "expert.json"
    path.write_text(
        '{"rules": [{"conditions": [{"feature": "amount", "op": ">", "threshold": 100}]}]}',
        encoding="utf-8",
    )

    result = runner.invoke(cli, ["export-rules", "--rules", str(path)])

    assert result.exit_code == 0
    assert result.stdout == "IF amount > 100.0 THEN FLAG\n"


def test_run_pipeline_without_the_cli(tmp_path, fraud_csv):
    config = ExperimentConfig.from_dict({
        "dataset": {"path": str(fraud_csv), "label_column": "is_fraud"},
        "seeds": [0],
        "models": ["figs"],
        "grid": [2, 4],
        "budget_max": 0.1,
        "sample_ratio": 0.5,
        "output_dir": str(tmp_path / "runs"),
    })
    config.validate()

    job = run_pipeline(config)

    assert job.status is JobStatus.COMPLETED
    assert [cell.status for cell in job.cells] == [JobStatus.COMPLETED]
    assert Path(job.run_directory).name == config.run_id()
    assert (Path(job.run_directory) / "0" / "figs" / REPORT_FILENAME).is_file()


def _manifest(path: Path) -> dict:
    lines = path.read_text(encoding="utf-8").splitlines()
    return dict(line.split("=", 1) for line in lines)


def test_run_flags_override_split_and_dataset_settings(runner, tmp_path, fraud_csv):
    out = tmp_path / "runs"
    result = runner.invoke(cli, _run_args(
        fraud_csv, out,
        "--split-mode", "temporal",
        "--order-column", "month",
        "--fractions", "0.5,0.25,0.25",
        "--split-seed", "3",
        "--categorical-policy", "onehot",
        "--sample-ratio-mode", "union",
    ))

    assert result.exit_code == 0, result.output
    run_dir = _run_dir(out)
    manifest = _manifest(run_dir / "manifest.txt")
    assert manifest["config.split.mode"] == "temporal"
    assert manifest["config.split.train_fraction"] == "0.5"
    assert manifest["config.split.seed"] == "3"
    assert manifest["config.dataset.order_column"] == "month"
    assert manifest["config.dataset.categorical_policy"] == "onehot"
    assert manifest["config.sample_ratio_mode"] == "union"
    assert _manifest(run_dir / "split_manifest.txt")["mode"] == "temporal"


def test_run_drop_column_changes_the_run(runner, tmp_path, fraud_csv):
    plain = runner.invoke(cli, _run_args(fraud_csv, tmp_path / "plain"))
    dropped = runner.invoke(cli, _run_args(fraud_csv, tmp_path / "dropped", "--drop-column", "velocity"))

    assert plain.exit_code == 0 and dropped.exit_code == 0
    manifest = _manifest(_run_dir(tmp_path / "dropped") / "manifest.txt")
    assert manifest["config.dataset.drop_columns"] == "velocity"
    assert _run_dir(tmp_path / "plain").name != _run_dir(tmp_path / "dropped").name


def test_split_with_a_reserved_feature_name_exits_with_data_error(runner, tmp_path):
    csv = tmp_path / "clash.csv"
    csv.write_text("order_key,amount,is_fraud\n1,10,0\n2,20,1\n3,30,0\n4,40,1\n", encoding="utf-8")

    result = runner.invoke(cli, ["split", "--data", str(csv), "--label", "is_fraud", "--out", str(tmp_path / "s")])

    assert result.exit_code == 2
    assert "order_key" in result.output


def test_split_into_a_file_exits_with_file_system_error(runner, tmp_path, fraud_csv):
    blocker = tmp_path / "splits"
    blocker.write_text("not a directory", encoding="utf-8")

    result = runner.invoke(cli, ["split", "--data", str(fraud_csv), "--label", "is_fraud", "--out", str(blocker)])

    assert result.exit_code == 2


# ------------------------------------------------------------
# ------------------- Output and artifacts -------------------
# ------------------------------------------------------------

def test_manifest_lines_keep_insertion_order(tmp_path):
    path = write_manifest(tmp_path / "run" / "manifest.txt", {"run_id": "abc", "finished_at": None, "cells": 4})

    assert read_text(path) == "run_id=abc\nfinished_at=\ncells=4\n"
    assert [p.name for p in path.parent.iterdir()] == ["manifest.txt"]


def test_text_artifact_replaces_previous_content(tmp_path):
    path = tmp_path / "aggregate.txt"
    write_text_artifact(path, "first\n")
    write_text_artifact(path, "second\n")

    assert read_text(path) == "second\n"


def test_reading_a_missing_report_is_a_file_system_error(tmp_path):
    with pytest.raises(FileSystemError, match="File not found"):
        read_text(tmp_path / "missing.txt")


def test_output_dir_cannot_be_a_file(tmp_path):
    target = tmp_path / "runs"
    target.write_text("", encoding="utf-8")

    with pytest.raises(FileSystemError, match="not a directory"):
        prepare_output_dir(target, "runs")


def test_logger_numbers_stages_and_hides_details(capsys):
    logger = CLILogger(stages=2)
    logger.stage("Validating configuration...")
    logger.detail("only shown with --verbose")
    logger.stage("Running experiment...")
    logger.wrote("Selection", "out/")

    out = capsys.readouterr().out
    assert "[1/2] Validating configuration..." in out
    assert "[2/2] Running experiment..." in out
    assert "--verbose" not in out
    assert "Selection written to out/" in out


def test_verbose_logger_shows_details_and_warns_on_stderr(capsys):
    logger = CLILogger(verbose=True)
    logger.stage("Selecting...")
    logger.detail("step 1: candidate 3")
    logger.warning("Candidates exhausted")

    captured = capsys.readouterr()
    assert "-> Selecting..." in captured.out
    assert "step 1: candidate 3" in captured.out
    assert "Warning: Candidates exhausted" in captured.err
