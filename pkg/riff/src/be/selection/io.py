"""
Selection documents.

selection.json references the candidate rules by index into the rules.json
it was selected from (identified by digest) and carries the step trace, the
last rule's firing probability and the budget.
"""

from pathlib import Path
from typing import Any, Dict

from pydantic import ValidationError

from riff.cli.utils.errors import FileSystemError, SchemaError
from riff.src.be.rules.models import CandidateRuleSet
from riff.src.be.selection.models import BudgetConstraint, SelectionResult, SelectionStep
from riff.src.config import FORMAT_VERSION, SELECTION_FORMAT
from riff.src.utils import file_manager


def selection_document(result: SelectionResult) -> Dict[str, Any]:
    return {
        "format": SELECTION_FORMAT,
        "version": FORMAT_VERSION,
        "budget": result.budget.model_dump(mode="json"),
        "candidate_indices": list(result.candidate_indices),
        "candidates_digest": result.candidates_digest,
        "selection_digest": result.selection_digest,
        "last_rule_probability": result.last_rule_probability,
        "terminated_early": result.terminated_early,
        "step_trace": [step.model_dump(mode="json") for step in result.step_trace],
    }


def save_selection(path: Path, result: SelectionResult) -> Path:
    path = Path(path)
    file_manager.ensure_directory(str(path.parent))
    file_manager.save_json(selection_document(result), str(path))
    return path


def load_selection(path: Path, candidates: CandidateRuleSet) -> SelectionResult:
    """
    Rebuild a SelectionResult against the candidate set it was selected from.

    Raises:
        SchemaError: Wrong format, or ``candidates`` is not the rule set the
            selection was made from
    """
    path = Path(path).expanduser()
    if not path.is_file():
        raise FileSystemError(f"Selection file not found: {path}")
    try:
        document = file_manager.load_json(str(path))
    except ValueError as e:
        raise SchemaError(f"{path.name} is not valid JSON: {e}")
    if not isinstance(document, dict) or document.get("format") != SELECTION_FORMAT:
        raise SchemaError(f"{path.name} is not a selection document")
    if document.get("version") != FORMAT_VERSION:
        raise SchemaError(f"{path.name}: unsupported selection version {document.get('version')!r}")

    expected = document.get("candidates_digest")
    if expected is not None and expected != candidates.digest():
        raise SchemaError(f"{path.name} was selected from a different candidate rule set")

    indices = [int(i) for i in document["candidate_indices"]]
    if any(i < 0 or i >= len(candidates) for i in indices):
        raise SchemaError(f"{path.name} references rules outside the candidate set")
    try:
        return SelectionResult(
            ordered_rules=[candidates.rules[i] for i in indices],
            candidate_indices=indices,
            step_trace=[SelectionStep.model_validate(step) for step in document.get("step_trace", [])],
            last_rule_probability=document["last_rule_probability"],
            terminated_early=bool(document.get("terminated_early", False)),
            budget=BudgetConstraint.model_validate(document["budget"]),
            selection_digest=document.get("selection_digest"),
            candidates_digest=expected,
        )
    except (KeyError, ValidationError) as e:
        raise SchemaError(f"{path.name}: malformed selection document ({e})")
