"""Rule documents and compiled ORDER automata."""

from .dfa import Dfa, RegexSyntaxError, compile_order, required_labels
from .loader import bundled_rules_dir, load_rule_file, load_rules, parse_rule
from .model import (
    CHECK_KINDS,
    ConstraintSpec,
    EventSpec,
    PLACEHOLDERS,
    QuickfixSpec,
    Rule,
    RuleFormatError,
    RuleSet,
    SEVERITIES,
)

__all__ = [
    "CHECK_KINDS",
    "ConstraintSpec",
    "Dfa",
    "EventSpec",
    "PLACEHOLDERS",
    "QuickfixSpec",
    "RegexSyntaxError",
    "Rule",
    "RuleFormatError",
    "RuleSet",
    "SEVERITIES",
    "bundled_rules_dir",
    "compile_order",
    "load_rule_file",
    "load_rules",
    "parse_rule",
    "required_labels",
]
