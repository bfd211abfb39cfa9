"""One analysis pipeline behind both the CLI and the language server.

parse -> build CFGs -> extract objects -> plan -> run strategies ->
escalate -> render notifications -> apply suppressions.

All scheduling decisions are driven by cost-model estimates frozen at plan
time, so a document analyzed twice with the same inputs produces byte-equal
results; wall-clock timings are only recorded into the cost model for later
runs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

from .analysis import Finding, run_strategy, sort_key
from .confidence import STRATEGY_COST_SEED_MS
from .feedback import FeedbackStore
from .notify import (
    Notification,
    apply_suppressions,
    build_quickfix,
    render_notification,
)
from .rules.model import RuleSet
from .scheduler import (
    AnalysisConfig,
    CostModel,
    Plan,
    effective_confidence,
    escalate,
    plan_initial,
)
from .syntax.cfg import build_cfg
from .syntax.lexer import LexError, tokenize
from .syntax.objects import extract_objects
from .syntax.parser import ParseDiagnostic, parse


@dataclass(frozen=True)
class ExecutedTask:
    rule_id: str
    method_name: str
    object_var: str
    strategy: str  # final strategy after escalation
    floored: bool


@dataclass(frozen=True)
class Escalation:
    rule_id: str
    method_name: str
    object_var: str
    from_strategy: str
    to_strategy: str
    before: tuple[Finding, ...]
    after: tuple[Finding, ...]


@dataclass
class DocumentAnalysis:
    file: str
    notifications: list[Notification] = field(default_factory=list)
    parse_diagnostics: tuple[ParseDiagnostic, ...] = ()
    executed: list[ExecutedTask] = field(default_factory=list)
    escalations: list[Escalation] = field(default_factory=list)

    @property
    def findings(self) -> list[Finding]:
        return [n.finding for n in self.notifications]


def _dedupe(findings: list[Finding]) -> list[Finding]:
    seen = set()
    out = []
    for f in sorted(findings, key=sort_key):
        key = sort_key(f)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def analyze_source(
    file: str,
    source: str,
    rule_set: RuleSet,
    config: AnalysisConfig | None = None,
    cost: CostModel | None = None,
    store: FeedbackStore | None = None,
) -> DocumentAnalysis:
    """Analyze one document. Raises LexError when the file cannot be lexed."""
    config = config or AnalysisConfig()
    cost = cost or CostModel()
    store = store or FeedbackStore()

    lex = tokenize(source)
    result = parse(lex.tokens, path=file)
    analysis = DocumentAnalysis(file=file, parse_diagnostics=result.diagnostics)

    cfgs = {}
    objects = []
    for method in result.unit.methods:
        cfg = build_cfg(method)
        cfgs[method.name] = cfg
        objects.extend(extract_objects(cfg))

    plan = plan_initial(rule_set, objects, config, cost, store)
    estimates = cost.snapshot()

    def estimate(rule_id: str, strategy: str) -> float:
        return estimates.get((rule_id, strategy), STRATEGY_COST_SEED_MS[strategy])

    escalation_pool = config.budget_ms - plan.reserved_ms
    esc_spent = 0.0
    budget_exhausted = False

    findings: list[Finding] = []
    for task in plan.tasks:
        cfg = cfgs[task.obj.method_name]
        level = task.strategy
        started = time.monotonic()
        current = run_strategy(
            level, cfg, task.obj, task.rule, file=file, path_bound=config.path_bound
        )
        cost.record(task.rule.id, level, (time.monotonic() - started) * 1000.0)

        while level != "S2":
            wanted = None
            for f in current:
                if f.strategy != level:
                    continue
                wanted = escalate(f, math.inf, config, estimate, store)
                if wanted is not None:
                    break
            if wanted is None:
                break
            remaining = escalation_pool - esc_spent
            if budget_exhausted or estimate(task.rule.id, wanted) > remaining:
                budget_exhausted = True
                break
            esc_spent += estimate(task.rule.id, wanted)
            started = time.monotonic()
            rerun = run_strategy(
                wanted, cfg, task.obj, task.rule, file=file, path_bound=config.path_bound
            )
            cost.record(task.rule.id, wanted, (time.monotonic() - started) * 1000.0)
            analysis.escalations.append(
                Escalation(
                    task.rule.id,
                    task.obj.method_name,
                    task.obj.object_var,
                    level,
                    wanted,
                    tuple(current),
                    tuple(rerun),
                )
            )
            current = rerun
            level = wanted

        analysis.executed.append(
            ExecutedTask(
                task.rule.id,
                task.obj.method_name,
                task.obj.object_var,
                level,
                task.floored,
            )
        )
        findings.extend(current)

    notifications = []
    for f in _dedupe(findings):
        rule = rule_set.by_id(f.rule_id)
        n = render_notification(f, rule)
        notifications.append(
            replace(
                n,
                quickfix=build_quickfix(f, rule, source),
                effective_confidence=round(effective_confidence(f, store), 4),
            )
        )
    notifications = apply_suppressions(notifications, source, store)
    notifications.sort(key=lambda n: sort_key(n.finding))
    analysis.notifications = notifications
    return analysis


def finding_json(n: Notification) -> dict:
    """The wire form of one finding; key order is part of the format."""
    f = n.finding
    return {
        "rule_id": f.rule_id,
        "file": f.file,
        "line": f.span.start_line,
        "col": f.span.start_col,
        "end_line": f.span.end_line,
        "end_col": f.span.end_col,
        "kind": f.kind,
        "severity": n.severity,
        "strategy": f.strategy,
        "certainty": f.certainty,
        "confidence": n.effective_confidence,
        "message": n.title,
        "fingerprint": n.fingerprint,
        "suppressed": n.suppressed,
    }


class AnalysisSession:
    """Shared mutable state for a run over many documents: one rule set,
    one cost model, one feedback store."""

    def __init__(
        self,
        rule_set: RuleSet,
        config: AnalysisConfig | None = None,
        store: FeedbackStore | None = None,
    ):
        self.rule_set = rule_set
        self.config = config or AnalysisConfig()
        self.store = store or FeedbackStore()
        self.cost = CostModel()

    def analyze(self, file: str, source: str) -> DocumentAnalysis:
        return analyze_source(
            file, source, self.rule_set, self.config, self.cost, self.store
        )
