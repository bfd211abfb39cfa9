from __future__ import annotations

import json
from pathlib import Path

import pytest

from cryptomate.rules import (
    RuleFormatError,
    bundled_rules_dir,
    load_rules,
    parse_rule,
)

from _support import RULES_DIR


def _write_rule(directory: Path, name: str, data: dict) -> Path:
    path = directory / f"{name}.rule.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def _minimal_rule(**overrides) -> dict:
    data = {
        "id": "sample-rule",
        "version": 1,
        "class": "Widget",
        "severity": "warning",
        "events": {
            "c": {"kind": "constructor", "name": "Widget", "arity": 0},
            "u": {"kind": "method", "name": "use", "arity": 0},
        },
        "order": "c u*",
        "constraints": [],
        "message": "Use {obj} correctly.",
        "explanation": "Widgets are delicate.",
        "noncompliant_example": "Widget w = new Widget();",
        "compliant_example": "Widget w = new Widget();\nw.use();",
    }
    data.update(overrides)
    return data


def test_bundled_pack_loads():
    rule_set = load_rules(bundled_rules_dir())
    assert [r.id for r in rule_set.rules] == [
        "bc-ec-elgamal-encryptor",
        "weak-cipher-name",
        "weak-key-size",
    ]
    assert rule_set.errors == []
    encryptor = rule_set.by_id("bc-ec-elgamal-encryptor")
    assert encryptor.order == "c i (i | e)*"
    assert encryptor.quickfix is not None
    assert rule_set.by_id("weak-key-size").quickfix is None


def test_repo_rules_dir_matches_packaged_pack():
    """The checked-in rules/ directory must stay byte-identical to the
    packaged copy; both are shipped."""
    packaged = bundled_rules_dir()
    repo_files = sorted(p.name for p in RULES_DIR.glob("*.rule.json"))
    packaged_files = sorted(p.name for p in Path(packaged).glob("*.rule.json"))
    assert repo_files == packaged_files and repo_files
    for name in repo_files:
        assert (RULES_DIR / name).read_bytes() == (Path(packaged) / name).read_bytes()


def test_empty_dir_is_empty_rule_set(tmp_path):
    rule_set = load_rules(tmp_path)
    assert rule_set.rules == [] and rule_set.errors == []


def test_missing_dir_raises(tmp_path):
    with pytest.raises(RuleFormatError):
        load_rules(tmp_path / "nope")


def test_undefined_order_label_rejected(tmp_path):
    _write_rule(tmp_path, "bad", _minimal_rule(order="c z"))
    rule_set = load_rules(tmp_path)
    assert rule_set.rules == []
    assert len(rule_set.errors) == 1
    assert "undefined label z" in str(rule_set.errors[0])


def test_bad_file_does_not_block_good_files(tmp_path):
    _write_rule(tmp_path, "bad", _minimal_rule(order="c ("))
    _write_rule(tmp_path, "good", _minimal_rule(id="good-rule"))
    rule_set = load_rules(tmp_path)
    assert [r.id for r in rule_set.rules] == ["good-rule"]
    assert len(rule_set.errors) == 1


def test_duplicate_ids_rejected(tmp_path):
    _write_rule(tmp_path, "a", _minimal_rule())
    _write_rule(tmp_path, "b", _minimal_rule())
    rule_set = load_rules(tmp_path)
    assert len(rule_set.rules) == 1
    assert "duplicate id" in str(rule_set.errors[0])


def test_unknown_top_level_key_rejected():
    with pytest.raises(RuleFormatError) as exc:
        parse_rule(_minimal_rule(surprise=True), "f")
    assert "unknown keys" in str(exc.value)


def test_non_kebab_id_rejected():
    with pytest.raises(RuleFormatError):
        parse_rule(_minimal_rule(id="NotKebab"), "f")


def test_constructor_name_must_match_class():
    data = _minimal_rule()
    data["events"]["c"]["name"] = "Other"
    with pytest.raises(RuleFormatError):
        parse_rule(data, "f")


def test_duplicate_event_signature_rejected():
    data = _minimal_rule()
    data["events"]["v"] = {"kind": "method", "name": "use", "arity": 0}
    data["order"] = "c u v"
    with pytest.raises(RuleFormatError):
        parse_rule(data, "f")


def test_constraint_validation():
    ok = _minimal_rule(
        events={
            "c": {"kind": "constructor", "name": "Widget", "arity": 1},
            "u": {"kind": "method", "name": "use", "arity": 0},
        },
        constraints=[{"event": "c", "arg": 0, "check": "int_min", "value": 16}],
    )
    rule = parse_rule(ok, "f")
    assert rule.constraints[0].check == "int_min"

    bad_arg = _minimal_rule(
        constraints=[{"event": "u", "arg": 0, "check": "int_min", "value": 16}]
    )
    with pytest.raises(RuleFormatError):
        parse_rule(bad_arg, "f")  # arity 0 leaves no argument 0

    bad_value = _minimal_rule(
        events={
            "c": {"kind": "constructor", "name": "Widget", "arity": 1},
            "u": {"kind": "method", "name": "use", "arity": 0},
        },
        constraints=[{"event": "c", "arg": 0, "check": "int_min", "value": "no"}],
    )
    with pytest.raises(RuleFormatError):
        parse_rule(bad_value, "f")

    bad_label = _minimal_rule(
        constraints=[{"event": "z", "arg": 0, "check": "int_min", "value": 1}]
    )
    with pytest.raises(RuleFormatError):
        parse_rule(bad_label, "f")


def test_unknown_placeholder_rejected():
    with pytest.raises(RuleFormatError) as exc:
        parse_rule(_minimal_rule(message="Do {things}."), "f")
    assert "placeholder" in str(exc.value)


def test_snippet_placeholders_allowed_in_quickfix():
    data = _minimal_rule(
        quickfix={"kind": "insert_before_first_violation", "text": "{obj}.use(${1:arg});"}
    )
    rule = parse_rule(data, "f")
    assert rule.quickfix.text == "{obj}.use(${1:arg});"


def test_bad_severity_rejected():
    with pytest.raises(RuleFormatError):
        parse_rule(_minimal_rule(severity="fatal"), "f")


def test_rules_sorted_by_id(tmp_path):
    _write_rule(tmp_path, "zz", _minimal_rule(id="zz-rule"))
    _write_rule(tmp_path, "aa", _minimal_rule(id="aa-rule"))
    rule_set = load_rules(tmp_path)
    assert [r.id for r in rule_set.rules] == ["aa-rule", "zz-rule"]
