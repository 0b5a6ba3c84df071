"""
Tests for rule extraction, simplification, coverage and rule files.
"""

import numpy as np
import pytest

from riff.cli.utils.errors import FileSystemError, SchemaError
from riff.src.be.data.dataset import LabeledDataset
from riff.src.be.rules.coverage import cov, covers, rule_mask
from riff.src.be.rules.extraction import extract_rules, simplify
from riff.src.be.rules.io import export_rules_text, load_rules, parse_rules_document, save_rules
from riff.src.be.rules.models import CandidateRuleSet, Condition, Operator, Rule
from riff.src.be.trees.growers import grow_cart, grow_figs, grow_figu
from riff.src.be.trees.model import ForestMode, ForestModel, ModelKind, TreeNode


def _rule(*conditions) -> Rule:
    return Rule(conditions=tuple(Condition(feature=f, op=Operator(op), threshold=t) for f, op, t in conditions))


def _depth_two_tree() -> ForestModel:
    """x <= 0.5 is one leaf; the right side splits again on y <= 2."""
    right = TreeNode(node_id=2, positive_count=5, total_count=8, depth=1, feature_index=1, threshold=2.0, gain=0.1)
    right.left = TreeNode(node_id=3, positive_count=1, total_count=4, depth=2)
    right.right = TreeNode(node_id=4, positive_count=4, total_count=4, depth=2)
    root = TreeNode(node_id=0, positive_count=6, total_count=12, feature_index=0, threshold=0.5, gain=0.2)
    root.left = TreeNode(node_id=1, positive_count=1, total_count=4, depth=1)
    root.right = right
    return ForestModel(trees=[root], mode=ForestMode.SINGLE, kind=ModelKind.CART, feature_names=["x", "y"])


# ------------------------------------------------------------
# ------------------------ Extraction ------------------------
# ------------------------------------------------------------

def test_root_leaf_gives_the_empty_rule():
    leaf = TreeNode(node_id=0, positive_count=2, total_count=5)
    model = ForestModel(trees=[leaf], mode=ForestMode.SINGLE, kind=ModelKind.CART, feature_names=["x"])

    candidates = extract_rules(model)

    assert len(candidates) == 1
    assert candidates.rules[0].conditions == ()
    assert candidates.rules[0].render() == "IF TRUE THEN FLAG"


def test_one_rule_per_leaf_left_first():
    candidates = extract_rules(_depth_two_tree())

    assert [rule.provenance.leaf_id for rule in candidates.rules] == [1, 3, 4]
    assert [len(rule.conditions) for rule in candidates.rules] == [1, 2, 2]
    assert candidates.rules[2].render() == "IF x > 0.5 AND y > 2.0 THEN FLAG"
    assert candidates.rules[1].train_stats.precision == pytest.approx(0.25)


def test_min_precision_skips_weak_leaves():
    candidates = extract_rules(_depth_two_tree(), min_precision=0.5)

    assert [rule.provenance.leaf_id for rule in candidates.rules] == [4]


@pytest.mark.parametrize("grower", [grow_cart, grow_figs, grow_figu])
def test_rule_coverage_equals_leaf_membership(grower, random_dataset):
    model = grower(random_dataset, max_splits=8)
    candidates = extract_rules(model)

    assert len(candidates) == sum(len(tree.leaves()) for tree in model.trees)
    for rule in candidates.rules:
        tree = model.trees[rule.provenance.tree_index]
        expected = tree.assign(random_dataset.features) == rule.provenance.leaf_id
        assert np.array_equal(rule_mask(rule, random_dataset), expected)


def test_extracted_rules_record_the_model_digest(random_dataset):
    model = grow_cart(random_dataset, max_splits=3)

    assert extract_rules(model).source_model_digest == model.digest()


# ------------------------------------------------------------
# ---------------------- Simplification ----------------------
# ------------------------------------------------------------

def test_simplify_keeps_tightest_upper_bound():
    simplified = simplify(_rule(("x", "<=", 5.0), ("x", "<=", 3.0)))

    assert simplified.conditions == _rule(("x", "<=", 3.0)).conditions


def test_simplify_orders_interval_lower_bound_first():
    simplified = simplify(_rule(("x", ">", 1.0), ("x", "<=", 4.0), ("x", ">", 2.0)))

    assert simplified.conditions == _rule(("x", ">", 2.0), ("x", "<=", 4.0)).conditions
    assert simplified.satisfiable


def test_simplify_flags_empty_interval():
    simplified = simplify(_rule(("x", ">", 4.0), ("x", "<=", 4.0)))

    assert not simplified.satisfiable


def test_simplify_preserves_coverage():
    rng = np.random.default_rng(17)
    ds = LabeledDataset(
        features=rng.uniform(0, 10, size=(500, 2)),
        labels=rng.integers(0, 2, size=500),
        feature_names=("x", "y"),
    )
    for _ in range(30):
        conditions = [
            (str(rng.choice(["x", "y"])), str(rng.choice(["<=", ">"])), float(rng.uniform(0, 10)))
            for _ in range(int(rng.integers(1, 6)))
        ]
        rule = _rule(*conditions)
        assert np.array_equal(rule_mask(simplify(rule), ds), rule_mask(rule, ds))


# ------------------------------------------------------------
# ------------------------- Coverage -------------------------
# ------------------------------------------------------------

def test_covers_single_row():
    rule = _rule(("amount", ">", 100.0))

    assert covers(rule, {"amount": 250.0})
    assert not covers(rule, {"amount": 100.0})
    assert covers(Rule(), {"amount": 0.0})


def test_covers_missing_feature_is_schema_error():
    with pytest.raises(SchemaError):
        covers(_rule(("amount", ">", 100.0)), {"velocity": 3.0})


def test_cov_is_union_of_row_ids():
    ds = LabeledDataset(
        features=np.array([[1.0], [5.0], [9.0]]),
        labels=np.array([0, 1, 1]),
        feature_names=("x",),
        row_ids=np.array([10, 20, 30]),
    )

    assert cov([], ds) == frozenset()
    assert cov([_rule(("x", "<=", 2.0)), _rule(("x", ">", 8.0))], ds) == frozenset({10, 30})


# ------------------------------------------------------------
# ------------------------ Rule files ------------------------
# ------------------------------------------------------------

def test_rule_file_reload_is_identical(tmp_path, random_dataset):
    candidates = extract_rules(grow_figu(random_dataset, max_splits=6))

    path = save_rules(tmp_path / "rules.json", candidates, last_rule_probability=0.25)
    reloaded, probability = load_rules(path)

    assert probability == 0.25
    assert reloaded.digest() == candidates.digest()


def test_hand_written_rules_are_accepted_and_simplified():
    document = {
        "rules": [
            {"conditions": [
                {"feature": "amount", "op": ">", "threshold": 100},
                {"feature": "amount", "op": ">", "threshold": 150},
            ]},
        ],
    }

    rule_set, probability = parse_rules_document(document)

    assert probability is None
    assert rule_set.rules[0].render() == "IF amount > 150.0 THEN FLAG"


@pytest.mark.parametrize("document", [
    [],
    {"format": "something-else", "rules": []},
    {"version": 99, "rules": []},
    {"rules": [{"conditions": [{"feature": "x", "op": "<", "threshold": 1}]}]},
    {"rules": [], "last_rule_probability": 1.5},
])
def test_malformed_rule_documents(document):
    with pytest.raises(SchemaError):
        parse_rules_document(document)


def test_load_rules_errors(tmp_path):
    with pytest.raises(FileSystemError):
        load_rules(tmp_path / "missing.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_rules(broken)


def test_duplicate_leaf_provenance_is_rejected():
    rule = Rule(provenance={"model_kind": "cart", "tree_index": 0, "leaf_id": 3})
    with pytest.raises(ValueError):
        CandidateRuleSet(rules=[rule, rule])


def test_text_export_one_line_per_rule(tmp_path):
    rules = [_rule(("amount", ">", 100.5)), _rule(("velocity", "<=", 3.0), ("amount", ">", 10.0))]

    text = export_rules_text([simplify(rule) for rule in rules])

    assert text.splitlines() == [
        "IF amount > 100.5 THEN FLAG",
        "IF amount > 10.0 AND velocity <= 3.0 THEN FLAG",
    ]
