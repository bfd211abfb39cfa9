"""Typestate strategies and argument-constraint checks.

Three strategies trade precision for time on one (tracked object, rule)
pair:

* S0 ignores call order entirely and only reports required events that
  never occur on the object;
* S1 runs a forward worklist analysis whose lattice is the powerset of DFA
  states, joining by union at control-flow merges and iterating loops to a
  fixpoint;
* S2 enumerates control-flow paths (each edge taken at most once, which
  yields every acyclic path plus one unrolling of each loop) and replays
  the event word of each path through the DFA.

Shared word semantics: a transition into the DFA's dead state is an
IllegalTransition anchored at the offending call, after which the word
stops producing further order findings; a live non-accepting state at exit
is an IncompleteLifecycle anchored at the object's declaration. A repeated
allocation restarts the word (strong update), so checks always concern the
most recent instance bound at that site.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .confidence import base_confidence
from .rules.dfa import Dfa
from .rules.model import ConstraintSpec, Rule
from .syntax.ast import Assign, Expr, IntLit, Span, StringLit, VarDecl, VarRef
from .syntax.cfg import Cfg
from .syntax.objects import TrackedObject

KINDS = ("IllegalTransition", "IncompleteLifecycle", "ConstraintViolation")


@dataclass(frozen=True)
class Finding:
    rule_id: str
    kind: str
    file: str
    method_name: str
    object_var: str
    span: Span
    strategy: str  # S0 | S1 | S2
    certainty: str  # Definite | Possible
    base_confidence: float
    context: dict[str, str | None] = field(default_factory=dict, hash=False)
    truncated: bool = False


def sort_key(f: Finding) -> tuple:
    return (
        f.file,
        f.span.start_line,
        f.span.start_col,
        f.rule_id,
        f.kind,
        f.object_var,
        f.certainty,
    )


def make_finding(
    *,
    rule: Rule,
    kind: str,
    file: str,
    obj: TrackedObject,
    span: Span,
    strategy: str,
    certainty: str,
    method: str | None,
    arg: str | None = None,
    truncated: bool = False,
) -> Finding:
    context: dict[str, str | None] = {
        "obj": obj.object_var,
        "method": method,
        "class": rule.class_name,
        "arg": arg,
    }
    return Finding(
        rule_id=rule.id,
        kind=kind,
        file=file,
        method_name=obj.method_name,
        object_var=obj.object_var,
        span=span,
        strategy=strategy,
        certainty=certainty,
        base_confidence=base_confidence(kind, strategy, certainty),
        context=context,
        truncated=truncated,
    )


# -- event mapping ---------------------------------------------------------


@dataclass(frozen=True)
class EventOcc:
    node_id: int
    seq: int
    label: str
    method: str
    span: Span
    args: tuple[Expr, ...]


def object_events(obj: TrackedObject, rule: Rule) -> list[EventOcc]:
    """The object's rule-mapped events, ordered by (node, evaluation slot)."""
    events: list[EventOcc] = []
    ctor = rule.event_for(
        kind="constructor", name=obj.class_name, arity=len(obj.alloc_args)
    )
    if ctor is not None:
        events.append(
            EventOcc(
                obj.alloc_node, obj.alloc_seq, ctor.label,
                obj.class_name, obj.alloc_span, obj.alloc_args,
            )
        )
    for site in obj.call_sites:
        spec = rule.event_for(kind="method", name=site.method, arity=len(site.args))
        if spec is not None:
            events.append(
                EventOcc(site.node_id, site.seq, spec.label, site.method, site.span, site.args)
            )
    events.sort(key=lambda e: (e.node_id, e.seq))
    return events


def _events_by_node(events: list[EventOcc]) -> dict[int, list[EventOcc]]:
    grouped: dict[int, list[EventOcc]] = {}
    for ev in events:
        grouped.setdefault(ev.node_id, []).append(ev)
    return grouped


# -- S0: required events only ----------------------------------------------


def run_s0(obj: TrackedObject, rule: Rule, dfa: Dfa, *, file: str) -> list[Finding]:
    """Report required events that never occur on the object.

    Silent on objects with no mapped events at all: an object the rule never
    touches is not this rule's business.
    """
    events = object_events(obj, rule)
    if not events:
        return []
    present = {e.label for e in events}
    findings = []
    for label in sorted(dfa.required_labels - present):
        spec = rule.events[label]
        findings.append(
            make_finding(
                rule=rule,
                kind="IncompleteLifecycle",
                file=file,
                obj=obj,
                span=obj.alloc_span,
                strategy="S0",
                certainty="Possible",
                method=spec.name,
            )
        )
    return findings


# -- S1: powerset dataflow ---------------------------------------------------


def _transfer_report(
    states: frozenset[int],
    events: list[EventOcc],
    dfa: Dfa,
    alloc: bool,
    report: list | None,
) -> frozenset[int]:
    """Apply one node's events; optionally collect per-call death info."""
    if alloc:
        states = frozenset({dfa.start})
    for ev in events:
        if not states:
            break
        moved = {dfa.step(s, ev.label) for s in states}
        live = frozenset(s for s in moved if s != dfa.dead)
        if report is not None and dfa.dead in moved:
            report.append((ev, len(live) == 0))
        states = live
    return states


def run_s1(cfg: Cfg, obj: TrackedObject, rule: Rule, dfa: Dfa, *, file: str) -> list[Finding]:
    """Forward worklist analysis over the powerset-of-DFA-states lattice."""
    events = _events_by_node(object_events(obj, rule))
    n_ids = [n.id for n in cfg.nodes]
    out: dict[int, frozenset[int]] = {i: frozenset() for i in n_ids}

    def transfer(node_id: int, incoming: frozenset[int], report=None) -> frozenset[int]:
        return _transfer_report(
            incoming, events.get(node_id, []), dfa, node_id == obj.alloc_node, report
        )

    worklist = list(n_ids)
    while worklist:
        node_id = worklist.pop(0)
        incoming = frozenset().union(
            *(out[e.src] for e in cfg.predecessors(node_id))
        )
        result = transfer(node_id, incoming)
        if result != out[node_id]:
            out[node_id] = result
            for e in cfg.successors(node_id):
                if e.dst not in worklist:
                    worklist.append(e.dst)

    findings: list[Finding] = []
    for node_id in n_ids:
        if node_id not in events and node_id != obj.alloc_node:
            continue
        incoming = frozenset().union(
            *(out[e.src] for e in cfg.predecessors(node_id))
        )
        report: list[tuple[EventOcc, bool]] = []
        transfer(node_id, incoming, report)
        for ev, all_dead in report:
            findings.append(
                make_finding(
                    rule=rule,
                    kind="IllegalTransition",
                    file=file,
                    obj=obj,
                    span=ev.span,
                    strategy="S1",
                    certainty="Definite" if all_dead else "Possible",
                    method=ev.method,
                )
            )

    exit_states = frozenset().union(
        *(out[e.src] for e in cfg.predecessors(cfg.exit))
    )
    if exit_states and not (exit_states & dfa.accepting):
        missing = _first_missing_method(rule, dfa, exit_states)
        findings.append(
            make_finding(
                rule=rule,
                kind="IncompleteLifecycle",
                file=file,
                obj=obj,
                span=obj.alloc_span,
                strategy="S1",
                certainty="Definite" if len(exit_states) == 1 else "Possible",
                method=missing,
            )
        )
    findings.sort(key=sort_key)
    return findings


def _first_missing_method(rule: Rule, dfa: Dfa, states: frozenset[int]) -> str | None:
    """A label that would make progress from some live state, for messages."""
    for label in dfa.alphabet:
        for s in sorted(states):
            if dfa.step(s, label) != dfa.dead:
                return rule.events[label].name
    return None


# -- S2: bounded path enumeration --------------------------------------------


def enumerate_paths(cfg: Cfg, bound: int) -> tuple[list[list[int]], bool]:
    """Entry-to-exit node paths, each edge used at most once.

    Successor edges are tried in stored order (then before else), so the
    result is lexicographic in branch choices. Returns (paths, truncated).
    """
    paths: list[list[int]] = []
    truncated = False

    def dfs(node_id: int, used: set[int], trail: list[int]) -> bool:
        if node_id == cfg.exit:
            paths.append(list(trail))
            return len(paths) < bound
        for idx, edge in enumerate(cfg.successors(node_id)):
            key = id(edge)
            if key in used:
                continue
            used.add(key)
            trail.append(edge.dst)
            keep_going = dfs(edge.dst, used, trail)
            trail.pop()
            used.remove(key)
            if not keep_going:
                return False
        return True

    completed = dfs(cfg.entry, set(), [cfg.entry])
    if not completed:
        truncated = True
    return paths, truncated


def run_s2(
    cfg: Cfg,
    obj: TrackedObject,
    rule: Rule,
    dfa: Dfa,
    path_bound: int = 64,
    *,
    file: str,
) -> list[Finding]:
    """Replay the object's event word along each enumerated path.

    Per call occurrence, a violation on every path that evaluates it live is
    Definite, on some of them Possible. Truncated enumeration caps every
    certainty at Possible and flags the findings.
    """
    assert path_bound >= 1
    events = _events_by_node(object_events(obj, rule))
    paths, truncated = enumerate_paths(cfg, path_bound)

    # per call occurrence: [violated_on_paths, ok_on_paths]
    call_stats: dict[tuple[int, int], list[int]] = {}
    occ_info: dict[tuple[int, int], EventOcc] = {}
    exit_incomplete = 0
    exit_complete = 0
    exit_live_states: set[int] = set()

    for path in paths:
        state: int | None = None  # None = not allocated yet
        dead = False
        for node_id in path:
            if node_id == obj.alloc_node:
                # strong update: a (re-)allocation restarts the word
                state = dfa.start
                dead = False
            for ev in events.get(node_id, []):
                if state is None or dead:
                    continue
                nxt = dfa.step(state, ev.label)
                key = (ev.node_id, ev.seq)
                occ_info[key] = ev
                stats = call_stats.setdefault(key, [0, 0])
                if nxt == dfa.dead:
                    stats[0] += 1
                    dead = True
                else:
                    stats[1] += 1
                    state = nxt
        if state is not None and not dead:
            if state in dfa.accepting:
                exit_complete += 1
            else:
                exit_incomplete += 1
                exit_live_states.add(state)

    findings: list[Finding] = []
    for key in sorted(call_stats):
        violated, ok = call_stats[key]
        if violated == 0:
            continue
        certainty = "Definite" if ok == 0 and not truncated else "Possible"
        ev = occ_info[key]
        findings.append(
            make_finding(
                rule=rule,
                kind="IllegalTransition",
                file=file,
                obj=obj,
                span=ev.span,
                strategy="S2",
                certainty=certainty,
                method=ev.method,
                truncated=truncated,
            )
        )
    if exit_incomplete:
        certainty = "Definite" if exit_complete == 0 and not truncated else "Possible"
        findings.append(
            make_finding(
                rule=rule,
                kind="IncompleteLifecycle",
                file=file,
                obj=obj,
                span=obj.alloc_span,
                strategy="S2",
                certainty=certainty,
                method=_first_missing_method(rule, dfa, frozenset(exit_live_states)),
                truncated=truncated,
            )
        )
    findings.sort(key=sort_key)
    return findings


# -- constraint checks --------------------------------------------------------


def _literal_assignments(cfg: Cfg) -> dict[str, list[Expr]]:
    """Every assignment per variable, for lite constant propagation."""
    assigned: dict[str, list[Expr]] = {}
    for node in cfg.nodes:
        stmt = node.stmt
        if isinstance(stmt, VarDecl) and stmt.init is not None:
            assigned.setdefault(stmt.name, []).append(stmt.init)
        elif isinstance(stmt, Assign):
            assigned.setdefault(stmt.name, []).append(stmt.value)
    return assigned


def resolve_literal(expr: Expr, assignments: dict[str, list[Expr]]):
    """Return an int or str literal value, or None when unresolvable.

    A variable resolves only when the method assigns it exactly once and
    that assignment is itself a literal.
    """
    if isinstance(expr, (IntLit, StringLit)):
        return expr.value
    if isinstance(expr, VarRef):
        writes = assignments.get(expr.name, [])
        if len(writes) == 1 and isinstance(writes[0], (IntLit, StringLit)):
            return writes[0].value
    return None


def _constraint_violates(spec: ConstraintSpec, value) -> bool | None:
    """True = violated, False = satisfied, None = cannot decide."""
    if spec.check == "int_min":
        if not isinstance(value, int):
            return None
        return value < spec.value
    if not isinstance(value, str):
        return None
    if spec.check == "string_allow":
        return value not in spec.value
    return value in spec.value  # string_deny


def check_constraints(
    cfg: Cfg, obj: TrackedObject, rule: Rule, *, file: str, strategy: str
) -> list[Finding]:
    """Check argument constraints on every mapped event occurrence."""
    assignments = _literal_assignments(cfg)
    findings: list[Finding] = []
    for ev in object_events(obj, rule):
        for spec in rule.constraints_for(ev.label):
            if spec.arg >= len(ev.args):
                continue
            value = resolve_literal(ev.args[spec.arg], assignments)
            verdict = _constraint_violates(spec, value) if value is not None else None
            if verdict is False:
                continue
            certainty = "Definite" if verdict is True else "Possible"
            findings.append(
                make_finding(
                    rule=rule,
                    kind="ConstraintViolation",
                    file=file,
                    obj=obj,
                    span=ev.span,
                    strategy=strategy,
                    certainty=certainty,
                    method=ev.method,
                    arg=None if value is None else str(value),
                )
            )
    findings.sort(key=sort_key)
    return findings


def run_strategy(
    strategy: str,
    cfg: Cfg,
    obj: TrackedObject,
    rule: Rule,
    *,
    file: str,
    path_bound: int = 64,
) -> list[Finding]:
    """One (object, rule) task: the order strategy plus constraint checks."""
    if strategy == "S0":
        order_findings = run_s0(obj, rule, rule.dfa, file=file)
    elif strategy == "S1":
        order_findings = run_s1(cfg, obj, rule, rule.dfa, file=file)
    elif strategy == "S2":
        order_findings = run_s2(cfg, obj, rule, rule.dfa, path_bound, file=file)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    findings = order_findings + check_constraints(
        cfg, obj, rule, file=file, strategy=strategy
    )
    findings.sort(key=sort_key)
    return findings
