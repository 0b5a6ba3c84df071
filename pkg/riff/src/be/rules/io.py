"""
Rule-set files.

The JSON document is the exchange format for both extracted and externally
authored rule sets; the text export prints one rule per line.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from riff.cli.utils.errors import FileSystemError, SchemaError
from riff.src.be.rules.extraction import simplify
from riff.src.be.rules.models import CandidateRuleSet, Rule
from riff.src.config import FORMAT_VERSION, RULES_FORMAT
from riff.src.utils import file_manager

logger = logging.getLogger(__name__)


def rules_document(
    rule_set: CandidateRuleSet,
    last_rule_probability: Optional[float] = None,
) -> Dict[str, Any]:
    document = {
        "format": RULES_FORMAT,
        "version": FORMAT_VERSION,
        "source_model_digest": rule_set.source_model_digest,
        "rules": [rule.model_dump(mode="json") for rule in rule_set.rules],
    }
    if last_rule_probability is not None:
        document["last_rule_probability"] = last_rule_probability
    return document


def save_rules(path: Path, rule_set: CandidateRuleSet, last_rule_probability: Optional[float] = None) -> Path:
    path = Path(path)
    file_manager.ensure_directory(str(path.parent))
    file_manager.save_json(rules_document(rule_set, last_rule_probability), str(path))
    return path


def parse_rules_document(document: Any, origin: str = "<document>") -> Tuple[CandidateRuleSet, Optional[float]]:
    """
    Validate a rule-set document.

    ``format`` and ``version`` may be omitted in hand-written files; when
    present they must match. Imported rules are simplified on the way in.

    Returns:
        (rule set, last rule probability or None)
    """
    if not isinstance(document, dict) or "rules" not in document:
        raise SchemaError(f"{origin}: expected an object with a 'rules' list")
    if document.get("format", RULES_FORMAT) != RULES_FORMAT:
        raise SchemaError(f"{origin}: not a rule-set document (format={document['format']!r})")
    if document.get("version", FORMAT_VERSION) != FORMAT_VERSION:
        raise SchemaError(f"{origin}: unsupported rule-set version {document['version']!r}")

    probability = document.get("last_rule_probability")
    if probability is not None and not 0.0 <= float(probability) <= 1.0:
        raise SchemaError(f"{origin}: last_rule_probability must be in [0, 1], got {probability}")

    try:
        rules: List[Rule] = [simplify(Rule.model_validate(raw)) for raw in document["rules"]]
        rule_set = CandidateRuleSet(rules=rules, source_model_digest=document.get("source_model_digest"))
    except ValidationError as e:
        raise SchemaError(f"{origin}: invalid rule definition: {e.errors()[0]['msg']}")
    return rule_set, None if probability is None else float(probability)


def load_rules(path: Path) -> Tuple[CandidateRuleSet, Optional[float]]:
    path = Path(path).expanduser()
    if not path.is_file():
        raise FileSystemError(f"Rule file not found: {path}")
    try:
        document = file_manager.load_json(str(path))
    except ValueError as e:
        raise SchemaError(f"{path.name} is not valid JSON: {e}")
    rule_set, probability = parse_rules_document(document, origin=path.name)
    logger.debug(f"Loaded {len(rule_set)} rules from {path}")
    return rule_set, probability


def export_rules_text(rules: List[Rule]) -> str:
    """One ``IF ... THEN FLAG`` line per rule; thresholds use the shortest round-trip repr."""
    return "".join(rule.render() + "\n" for rule in rules)
