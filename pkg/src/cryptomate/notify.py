"""Notification rendering, fingerprints, suppressions, quick fixes.

A fingerprint identifies a finding across edits: it hashes what the finding
is about (rule, file, method, object, kind) and deliberately ignores line
numbers, so feedback survives unrelated edits. Renaming the object variable
changes the fingerprint; that is accepted behavior.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace as dc_replace

from .analysis import Finding
from .confidence import SEVERITY_RANK
from .feedback import FeedbackStore, fp_rate, verdict_count
from .rules.model import PLACEHOLDERS, Rule
from .syntax.lexer import LexError, tokenize

FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211

SUPPRESS_TOKEN = "cm:allow"
LEARNED_MIN_VERDICTS = 3
LEARNED_MIN_RATE = 0.8  # strictly greater than

_PLACEHOLDER_RE = re.compile(r"\{([a-z]+)\}")
ELLIPSIS = "…"


class TemplateError(Exception):
    pass


def fnv1a_64(data: bytes) -> int:
    value = FNV_OFFSET_BASIS
    for byte in data:
        value ^= byte
        value = (value * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return value


def fingerprint(f: Finding) -> str:
    canonical = "|".join((f.rule_id, f.file, f.method_name, f.object_var, f.kind))
    return format(fnv1a_64(canonical.encode("utf-8")), "016x")


@dataclass(frozen=True)
class TextEdit:
    file: str
    line: int  # 1-based insertion point, start of line
    col: int
    new_text: str  # may contain ${n:hint} placeholders


@dataclass(frozen=True)
class Notification:
    finding: Finding
    fingerprint: str
    title: str
    explanation: str
    noncompliant_example: str
    compliant_example: str
    severity: str
    quickfix: TextEdit | None
    effective_confidence: float = 0.0
    suppressed: bool = False
    suppression_reason: str | None = None  # annotation | learned


def _substitute(template: str, context: dict[str, str | None]) -> str:
    def repl(match: re.Match) -> str:
        name = match.group(1)
        if name not in PLACEHOLDERS:
            raise TemplateError(f"unknown placeholder {{{name}}}")
        value = context.get(name)
        if value is None:
            return ELLIPSIS
        return value

    return _PLACEHOLDER_RE.sub(repl, template)


def render_notification(f: Finding, rule: Rule) -> Notification:
    """Fill the rule's message and example templates from the finding context."""
    if f.rule_id != rule.id:
        raise ValueError(f"finding {f.rule_id} rendered with rule {rule.id}")
    return Notification(
        finding=f,
        fingerprint=fingerprint(f),
        title=_substitute(rule.message, f.context),
        explanation=rule.explanation,
        noncompliant_example=_substitute(rule.noncompliant_example, f.context),
        compliant_example=_substitute(rule.compliant_example, f.context),
        severity=rule.severity,
        quickfix=None,
    )


# -- quick fixes ---------------------------------------------------------------


def _indent_of(line_text: str) -> str:
    return line_text[: len(line_text) - len(line_text.lstrip(" \t"))]


def _method_close_line(source_lines: list[str], f: Finding) -> int | None:
    """Line of the closing brace of the finding's method, by brace counting."""
    try:
        lex = tokenize("\n".join(source_lines))
    except LexError:
        return None
    tokens = lex.tokens
    depth = 0
    in_method = False
    for i, tok in enumerate(tokens):
        if not in_method:
            if (
                tok.text == "void"
                and i + 1 < len(tokens)
                and tokens[i + 1].text == f.method_name
            ):
                in_method = True
                depth = 0
            continue
        if tok.text == "{":
            depth += 1
        elif tok.text == "}":
            depth -= 1
            if depth == 0:
                return tok.line
    return None


def build_quickfix(f: Finding, rule: Rule, source: str) -> TextEdit | None:
    """Insertion edit for the rule's quick-fix template, or None.

    The snippet goes on a fresh line before the violating call, indented like
    it; an IncompleteLifecycle has no violating call, so the snippet lands
    just before the method's closing brace instead (the last point the object
    is still in scope).
    """
    if rule.quickfix is None or f.kind not in ("IllegalTransition", "IncompleteLifecycle"):
        return None
    lines = source.splitlines()
    if f.kind == "IllegalTransition":
        anchor = f.span.start_line
    else:
        anchor = _method_close_line(lines, f)
        if anchor is None:
            return None
    if not 1 <= anchor <= len(lines):
        return None
    indent = _indent_of(lines[f.span.start_line - 1]) if f.span.start_line <= len(lines) else ""
    text = rule.quickfix.text.replace("{obj}", f.object_var)
    return TextEdit(file=f.file, line=anchor, col=1, new_text=f"{indent}{text}\n")


# -- suppression -----------------------------------------------------------------


def _allowed_ids(comment_text: str) -> list[str]:
    body = comment_text.strip()
    if not body.startswith(SUPPRESS_TOKEN):
        return []
    rest = body[len(SUPPRESS_TOKEN) :].strip()
    return [part.strip() for part in rest.split(",") if part.strip()]


def apply_suppressions(
    notifications: list[Notification], source: str, stats: FeedbackStore
) -> list[Notification]:
    """Mark suppressed notifications; never drops any.

    An annotation comment ``// cm:allow <id>[,<id>...]`` suppresses matching
    rules on its own line and on the following line. A fingerprint with at
    least three verdicts and a smoothed false-positive rate above 0.8 is
    suppressed as learned.
    """
    try:
        comments = tokenize(source).comments
    except LexError:
        comments = ()
    allow_by_line: dict[int, set[str]] = {}
    for comment in comments:
        ids = _allowed_ids(comment.text)
        if ids:
            allow_by_line.setdefault(comment.line, set()).update(ids)

    out: list[Notification] = []
    for n in notifications:
        line = n.finding.span.start_line
        allowed = allow_by_line.get(line, set()) | allow_by_line.get(line - 1, set())
        if n.finding.rule_id in allowed:
            out.append(dc_replace(n, suppressed=True, suppression_reason="annotation"))
            continue
        if (
            verdict_count(stats, n.fingerprint) >= LEARNED_MIN_VERDICTS
            and fp_rate(stats, n.fingerprint) > LEARNED_MIN_RATE
        ):
            out.append(dc_replace(n, suppressed=True, suppression_reason="learned"))
            continue
        out.append(n)
    return out


def prioritize(notifications: list[Notification]) -> list[Notification]:
    """Display order for notifications sharing a range: most severe first,
    then higher confidence, then rule id."""
    return sorted(
        notifications,
        key=lambda n: (
            SEVERITY_RANK[n.severity],
            -n.effective_confidence,
            n.finding.rule_id,
        ),
    )
