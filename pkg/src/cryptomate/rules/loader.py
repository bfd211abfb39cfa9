"""Loading and strict validation of `*.rule.json` files."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .dfa import RegexSyntaxError, compile_order
from .model import (
    CHECK_KINDS,
    ConstraintSpec,
    EventSpec,
    QuickfixSpec,
    Rule,
    RuleFormatError,
    RuleSet,
    SEVERITIES,
    check_template,
    validate_id,
    validate_label,
)

_TOP_KEYS = {
    "id",
    "version",
    "class",
    "severity",
    "events",
    "order",
    "constraints",
    "message",
    "explanation",
    "noncompliant_example",
    "compliant_example",
    "quickfix",
}
_EVENT_KEYS = {"kind", "name", "arity"}
_CONSTRAINT_KEYS = {"event", "arg", "check", "value"}
_QUICKFIX_KEYS = {"kind", "text"}
_QUICKFIX_KINDS = {"insert_before_first_violation"}


def bundled_rules_dir() -> Path:
    """Directory holding the rule pack shipped with the package."""
    return Path(resources.files("cryptomate").joinpath("data", "rules"))


def _require(data: dict, key: str, types, file: str):
    if key not in data:
        raise RuleFormatError(file, f"missing key {key!r}")
    value = data[key]
    if not isinstance(value, types):
        raise RuleFormatError(file, f"key {key!r} has the wrong type")
    return value


def parse_rule(data: dict, file: str) -> Rule:
    if not isinstance(data, dict):
        raise RuleFormatError(file, "top level is not an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise RuleFormatError(file, f"unknown keys: {', '.join(sorted(unknown))}")

    rule_id = _require(data, "id", str, file)
    validate_id(rule_id, file)
    version = _require(data, "version", int, file)
    class_name = _require(data, "class", str, file)
    severity = _require(data, "severity", str, file)
    if severity not in SEVERITIES:
        raise RuleFormatError(file, f"severity {severity!r} not in {SEVERITIES}")

    raw_events = _require(data, "events", dict, file)
    if not raw_events:
        raise RuleFormatError(file, "events must not be empty")
    events: dict[str, EventSpec] = {}
    signatures: set[tuple[str, str, int]] = set()
    for label in sorted(raw_events):
        validate_label(label, file)
        spec = raw_events[label]
        if not isinstance(spec, dict) or set(spec) != _EVENT_KEYS:
            raise RuleFormatError(file, f"event {label}: expected keys {sorted(_EVENT_KEYS)}")
        kind, name, arity = spec["kind"], spec["name"], spec["arity"]
        if kind not in ("constructor", "method"):
            raise RuleFormatError(file, f"event {label}: bad kind {kind!r}")
        if not isinstance(name, str) or not isinstance(arity, int) or arity < 0:
            raise RuleFormatError(file, f"event {label}: bad name or arity")
        if kind == "constructor" and name != class_name:
            raise RuleFormatError(
                file, f"event {label}: constructor name must equal class {class_name!r}"
            )
        if (kind, name, arity) in signatures:
            raise RuleFormatError(
                file, f"event {label}: duplicate signature {name}/{arity}"
            )
        signatures.add((kind, name, arity))
        events[label] = EventSpec(label, kind, name, arity)

    order = _require(data, "order", str, file)
    try:
        dfa = compile_order(order, set(events))
    except RegexSyntaxError as exc:
        raise RuleFormatError(file, f"order: {exc.message}") from exc

    constraints: list[ConstraintSpec] = []
    for idx, raw in enumerate(data.get("constraints", [])):
        if not isinstance(raw, dict) or set(raw) != _CONSTRAINT_KEYS:
            raise RuleFormatError(
                file, f"constraint #{idx}: expected keys {sorted(_CONSTRAINT_KEYS)}"
            )
        event, arg, check, value = raw["event"], raw["arg"], raw["check"], raw["value"]
        if event not in events:
            raise RuleFormatError(file, f"constraint #{idx}: undefined label {event}")
        if not isinstance(arg, int) or not 0 <= arg < events[event].arity:
            raise RuleFormatError(
                file, f"constraint #{idx}: arg index out of range for {event}"
            )
        if check not in CHECK_KINDS:
            raise RuleFormatError(file, f"constraint #{idx}: bad check {check!r}")
        if check == "int_min":
            if not isinstance(value, int):
                raise RuleFormatError(file, f"constraint #{idx}: int_min needs an int value")
            constraints.append(ConstraintSpec(event, arg, check, value))
        else:
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise RuleFormatError(
                    file, f"constraint #{idx}: {check} needs a list of strings"
                )
            constraints.append(ConstraintSpec(event, arg, check, tuple(value)))

    message = _require(data, "message", str, file)
    explanation = _require(data, "explanation", str, file)
    noncompliant = _require(data, "noncompliant_example", str, file)
    compliant = _require(data, "compliant_example", str, file)
    for field_name, template in (
        ("message", message),
        ("noncompliant_example", noncompliant),
        ("compliant_example", compliant),
    ):
        check_template(template, file=file, field_name=field_name)

    quickfix: QuickfixSpec | None = None
    if "quickfix" in data and data["quickfix"] is not None:
        raw_qf = data["quickfix"]
        if not isinstance(raw_qf, dict) or set(raw_qf) != _QUICKFIX_KEYS:
            raise RuleFormatError(file, f"quickfix: expected keys {sorted(_QUICKFIX_KEYS)}")
        if raw_qf["kind"] not in _QUICKFIX_KINDS:
            raise RuleFormatError(file, f"quickfix: bad kind {raw_qf['kind']!r}")
        text = raw_qf["text"]
        if not isinstance(text, str) or not text:
            raise RuleFormatError(file, "quickfix: text must be a non-empty string")
        check_template(text, file=file, field_name="quickfix.text")
        quickfix = QuickfixSpec(raw_qf["kind"], text)

    return Rule(
        id=rule_id,
        version=version,
        class_name=class_name,
        severity=severity,
        events=events,
        order=order,
        constraints=tuple(constraints),
        message=message,
        explanation=explanation,
        noncompliant_example=noncompliant,
        compliant_example=compliant,
        quickfix=quickfix,
        dfa=dfa,
    )


def load_rule_file(path: Path) -> Rule:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RuleFormatError(str(path), f"unreadable rule file: {exc}") from exc
    return parse_rule(data, str(path))


def load_rules(directory: str | Path) -> RuleSet:
    """Load every `*.rule.json` under ``directory``.

    A malformed file is recorded as a :class:`RuleFormatError` and never
    blocks loading of the well-formed ones. Rules come back sorted by id;
    a duplicate id is an error charged to the later file (by filename).
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise RuleFormatError(str(directory), "rules directory does not exist")
    rule_set = RuleSet()
    seen: dict[str, Path] = {}
    for path in sorted(directory.glob("*.rule.json")):
        try:
            rule = load_rule_file(path)
            if rule.id in seen:
                raise RuleFormatError(
                    str(path), f"duplicate id {rule.id!r} (also in {seen[rule.id].name})"
                )
            seen[rule.id] = path
            rule_set.rules.append(rule)
        except RuleFormatError as exc:
            rule_set.errors.append(exc)
    rule_set.rules.sort(key=lambda r: r.id)
    return rule_set
