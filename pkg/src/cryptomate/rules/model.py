"""Rule documents: one crypto-API usage specification per file.

A rule names a class, its security-relevant events (constructor and method
signatures), the legal call order as a regular expression over event labels,
argument constraints, and the notification texts shown to the developer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .dfa import Dfa

SEVERITIES = ("error", "warning", "info")
CHECK_KINDS = ("int_min", "string_allow", "string_deny")
PLACEHOLDERS = frozenset({"obj", "method", "class", "arg"})

_ID_RE = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")
_LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_PLACEHOLDER_RE = re.compile(r"\{([a-z]+)\}")


class RuleFormatError(Exception):
    def __init__(self, file: str, reason: str):
        super().__init__(f"{file}: {reason}")
        self.file = file
        self.reason = reason


@dataclass(frozen=True)
class EventSpec:
    label: str
    kind: str  # constructor | method
    name: str
    arity: int


@dataclass(frozen=True)
class ConstraintSpec:
    event: str  # event label
    arg: int  # 0-based argument index
    check: str  # int_min | string_allow | string_deny
    value: int | tuple[str, ...]


@dataclass(frozen=True)
class QuickfixSpec:
    kind: str  # insert_before_first_violation
    text: str  # may contain {obj} and ${n:hint} placeholders


@dataclass(frozen=True)
class Rule:
    id: str
    version: int
    class_name: str
    severity: str
    events: dict[str, EventSpec]
    order: str
    constraints: tuple[ConstraintSpec, ...]
    message: str
    explanation: str
    noncompliant_example: str
    compliant_example: str
    quickfix: QuickfixSpec | None
    dfa: Dfa

    def event_for(self, *, kind: str, name: str, arity: int) -> EventSpec | None:
        """Exact signature match; unmatched calls emit no event."""
        for spec in self.events.values():
            if spec.kind == kind and spec.name == name and spec.arity == arity:
                return spec
        return None

    def constraints_for(self, label: str) -> tuple[ConstraintSpec, ...]:
        return tuple(c for c in self.constraints if c.event == label)


@dataclass
class RuleSet:
    rules: list[Rule] = field(default_factory=list)
    errors: list[RuleFormatError] = field(default_factory=list)

    def by_id(self, rule_id: str) -> Rule:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        raise KeyError(rule_id)

    def for_class(self, class_name: str) -> list[Rule]:
        return [r for r in self.rules if r.class_name == class_name]


def check_template(template: str, *, file: str, field_name: str) -> None:
    """Reject `{...}` placeholders outside the allowed set."""
    for match in _PLACEHOLDER_RE.finditer(template):
        if match.group(1) not in PLACEHOLDERS:
            raise RuleFormatError(
                file, f"{field_name}: unknown placeholder {{{match.group(1)}}}"
            )


def validate_id(rule_id: str, file: str) -> None:
    if not _ID_RE.match(rule_id):
        raise RuleFormatError(file, f"id {rule_id!r} is not kebab-case")


def validate_label(label: str, file: str) -> None:
    if not _LABEL_RE.match(label):
        raise RuleFormatError(file, f"label {label!r} is not an identifier")
