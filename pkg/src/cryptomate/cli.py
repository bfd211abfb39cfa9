"""Batch front end.

Subcommands: `analyze` for files or trees, `serve --stdio` for the language
server, `rules check` for rule-pack validation, `feedback stats` for verdict
statistics. Exit codes: 0 nothing to report, 1 findings at or above the
fail-on threshold, 2 usage or input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .feedback import (
    DEFAULT_STORE_PATH,
    FeedbackStore,
    fp_rate,
    load_store_with_recovery,
)
from .notify import Notification
from .pipeline import AnalysisSession, finding_json
from .rules import RuleFormatError, bundled_rules_dir, load_rules
from .scheduler import AnalysisConfig
from .syntax.lexer import LexError

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cryptomate",
        description="Crypto-API misuse analysis for MiniJava-CF sources.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze files or directories")
    analyze.add_argument("paths", nargs="+", metavar="path")
    _add_analysis_flags(analyze)
    analyze.add_argument("--format", choices=("json", "text"), default="text")
    analyze.add_argument(
        "--fail-on",
        choices=("error", "warning", "never"),
        default="warning",
        help="lowest severity that drives exit code 1 (default: warning)",
    )

    serve = sub.add_parser("serve", help="run the language server")
    serve.add_argument("--stdio", action="store_true", required=True)
    _add_analysis_flags(serve)

    rules = sub.add_parser("rules", help="rule pack utilities")
    rules_sub = rules.add_subparsers(dest="rules_command", required=True)
    rules_check = rules_sub.add_parser("check", help="validate a rules directory")
    rules_check.add_argument("dir", metavar="DIR")

    feedback = sub.add_parser("feedback", help="feedback store utilities")
    feedback_sub = feedback.add_subparsers(dest="feedback_command", required=True)
    stats = feedback_sub.add_parser("stats", help="print verdict statistics")
    stats.add_argument("--feedback-store", default=DEFAULT_STORE_PATH)

    return parser


def _add_analysis_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--rules", default=None, metavar="DIR", help="rules directory")
    sub.add_argument("--budget-ms", type=int, default=500)
    sub.add_argument("--min-confidence", type=float, default=0.50)
    sub.add_argument("--feedback-store", default=DEFAULT_STORE_PATH)


def _collect_sources(raw_paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in raw_paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(path.rglob("*.mj")))
        elif path.is_file():
            files.append(path)
        else:
            raise FileNotFoundError(raw)
    return files


def _load_rule_set(rules_dir: str | None):
    directory = Path(rules_dir) if rules_dir else bundled_rules_dir()
    rule_set = load_rules(directory)
    for err in rule_set.errors:
        print(f"warning: {err}", file=sys.stderr)
    return rule_set


def _text_line(n: Notification) -> str:
    f = n.finding
    return (
        f"{f.file}:{f.span.start_line}:{f.span.start_col} "
        f"{n.severity} {f.rule_id} {n.title} "
        f"[{f.strategy},{n.effective_confidence:.2f}]"
    )


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        files = _collect_sources(args.paths)
    except FileNotFoundError as exc:
        print(f"error: no such file or directory: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rule_set = _load_rule_set(args.rules)
    except RuleFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    store, warning = load_store_with_recovery(args.feedback_store)
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    config = AnalysisConfig(budget_ms=args.budget_ms, min_confidence=args.min_confidence)
    session = AnalysisSession(rule_set, config, store)

    notifications: list[Notification] = []
    for path in files:
        try:
            source = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        try:
            result = session.analyze(str(path), source)
        except LexError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        for diag in result.parse_diagnostics:
            print(f"warning: {path}: syntax error at {diag.message}", file=sys.stderr)
        notifications.extend(result.notifications)

    if args.format == "json":
        payload = {"version": 1, "findings": [finding_json(n) for n in notifications]}
        print(json.dumps(payload, indent=2))
    else:
        for n in notifications:
            print(_text_line(n))

    if args.fail_on == "never":
        return EXIT_OK
    threshold = {"error": ("error",), "warning": ("error", "warning")}[args.fail_on]
    reportable = [
        n for n in notifications if not n.suppressed and n.severity in threshold
    ]
    return EXIT_FINDINGS if reportable else EXIT_OK


def _cmd_rules_check(args: argparse.Namespace) -> int:
    try:
        rule_set = load_rules(args.dir)
    except RuleFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for err in rule_set.errors:
        print(f"error: {err}", file=sys.stderr)
    if rule_set.errors:
        return EXIT_USAGE
    print(f"{len(rule_set.rules)} rules OK")
    return EXIT_OK


def _cmd_feedback_stats(args: argparse.Namespace) -> int:
    store, warning = load_store_with_recovery(args.feedback_store)
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    _print_stats(store)
    return EXIT_OK


def _print_stats(store: FeedbackStore) -> None:
    total = sum(len(r.verdicts) for r in store.records.values())
    print(f"fingerprints: {len(store.records)}, verdicts: {total}")
    pairs = sorted(
        {
            (rec.rule_id, v.strategy)
            for rec in store.records.values()
            for v in rec.verdicts
        }
    )
    for rule_id, strategy in pairs:
        verdicts = [
            v
            for rec in store.records.values()
            if rec.rule_id == rule_id
            for v in rec.verdicts
            if v.strategy == strategy
        ]
        fp = sum(1 for v in verdicts if v.verdict == "fp")
        rate = fp_rate(store, (rule_id, strategy))
        print(
            f"{rule_id}/{strategy}: fp={fp} tp={len(verdicts) - fp} "
            f"smoothed_rate={rate:.4f}"
        )


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "serve":
            from .server import serve_stdio

            return serve_stdio(
                rules_dir=args.rules,
                feedback_store=args.feedback_store,
                budget_ms=args.budget_ms,
                min_confidence=args.min_confidence,
            )
        if args.command == "rules":
            return _cmd_rules_check(args)
        if args.command == "feedback":
            return _cmd_feedback_stats(args)
        parser.error(f"unknown command {args.command!r}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
