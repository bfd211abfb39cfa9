"""Adaptive strategy selection under a time budget.

Strategy choice per (rule, object) pair: the cheapest strategy whose best
attainable confidence, discounted by the recorded false-positive rate for
that (rule, strategy), clears the configured floor; if none does, S2.

Packing is prefix-greedy over the (severity desc, estimated cost asc)
task order: once the cumulative estimate overflows the budget, every
remaining pair falls back to an S0 task instead of being dropped. The S0
floor tasks are exempt from the budget cap, which is what makes raising
the budget strictly monotone (more budget can only promote tasks, never
reshuffle them away).

Budget arithmetic uses the cost model's estimates, not the wall clock, so
two runs with equal inputs make identical decisions; measured timings only
feed the moving averages for later runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import Finding
from .confidence import (
    COST_EMA_ALPHA,
    COST_FLOOR_MS,
    PLANNING_CONFIDENCE,
    SEVERITY_RANK,
    STRATEGIES,
    STRATEGY_COST_SEED_MS,
    next_strategy,
    weakest_base,
)
from .feedback import FeedbackStore, fp_rate
from .rules.model import Rule, RuleSet
from .syntax.objects import TrackedObject


@dataclass(frozen=True)
class AnalysisConfig:
    budget_ms: int = 500
    min_confidence: float = 0.50
    escalation_margin: float = 0.10
    path_bound: int = 64

    def __post_init__(self):
        if self.budget_ms <= 0:
            raise ValueError("budget_ms must be positive")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError("min_confidence must be within [0, 1]")


class CostModel:
    """Exponential moving average of per-method strategy cost, in ms."""

    def __init__(self):
        self._avg: dict[tuple[str, str], float] = {}

    def estimate(self, rule_id: str, strategy: str) -> float:
        return self._avg.get((rule_id, strategy), STRATEGY_COST_SEED_MS[strategy])

    def record(self, rule_id: str, strategy: str, elapsed_ms: float) -> None:
        if elapsed_ms < 0:
            raise ValueError("elapsed_ms must be >= 0")
        current = self.estimate(rule_id, strategy)
        updated = COST_EMA_ALPHA * elapsed_ms + (1 - COST_EMA_ALPHA) * current
        self._avg[(rule_id, strategy)] = max(updated, COST_FLOOR_MS)

    def snapshot(self) -> dict[tuple[str, str], float]:
        return dict(self._avg)


def record_cost(cost: CostModel, rule_id: str, strategy: str, elapsed_ms: float) -> CostModel:
    cost.record(rule_id, strategy, elapsed_ms)
    return cost


def effective_confidence(f: Finding, stats: FeedbackStore) -> float:
    """Base confidence discounted by the (rule, strategy) false-positive rate."""
    return f.base_confidence * (1.0 - fp_rate(stats, (f.rule_id, f.strategy)))


def choose_strategy(
    rule: Rule, config: AnalysisConfig, cost: CostModel, stats: FeedbackStore
) -> str:
    """Cheapest strategy whose best-case discounted confidence clears the floor."""
    by_cost = sorted(STRATEGIES, key=lambda s: (cost.estimate(rule.id, s), s))
    for strategy in by_cost:
        best = PLANNING_CONFIDENCE[strategy] * (1.0 - fp_rate(stats, (rule.id, strategy)))
        if best >= config.min_confidence:
            return strategy
    return "S2"


@dataclass(frozen=True)
class PlanTask:
    rule: Rule
    obj: TrackedObject
    strategy: str
    estimated_ms: float
    floored: bool = False  # True when the budget demoted the pair to S0


@dataclass
class Plan:
    tasks: list[PlanTask] = field(default_factory=list)
    # cost of every pair's chosen strategy, packed or not; escalation spends
    # only the budget surplus above this reservation, which keeps the whole
    # schedule monotone in the budget
    reserved_ms: float = 0.0

    @property
    def planned_ms(self) -> float:
        return sum(t.estimated_ms for t in self.tasks if not t.floored)


def plan_initial(
    rules: RuleSet,
    objects: list[TrackedObject],
    config: AnalysisConfig,
    cost: CostModel,
    stats: FeedbackStore,
) -> Plan:
    """Plan one task per applicable (rule, object) pair, packed into budget."""
    candidates: list[PlanTask] = []
    for obj_index, obj in enumerate(objects):
        for rule in rules.for_class(obj.class_name):
            strategy = choose_strategy(rule, config, cost, stats)
            candidates.append(
                PlanTask(rule, obj, strategy, cost.estimate(rule.id, strategy))
            )
    order = {id(obj): i for i, obj in enumerate(objects)}
    candidates.sort(
        key=lambda t: (
            SEVERITY_RANK[t.rule.severity],
            t.estimated_ms,
            t.rule.id,
            order[id(t.obj)],
        )
    )

    plan = Plan(reserved_ms=sum(t.estimated_ms for t in candidates))
    spent = 0.0
    overflowed = False
    for task in candidates:
        if not overflowed and spent + task.estimated_ms <= config.budget_ms:
            spent += task.estimated_ms
            plan.tasks.append(task)
        else:
            overflowed = True
            plan.tasks.append(
                PlanTask(task.rule, task.obj, "S0", cost.estimate(task.rule.id, "S0"), True)
            )
    return plan


def escalate(
    f: Finding,
    remaining_ms: float,
    config: AnalysisConfig,
    cost_estimate,
    stats: FeedbackStore,
) -> str | None:
    """Return the strategy to rerun at, or None to keep the finding.

    ``cost_estimate`` is a callable (rule_id, strategy) -> ms, normally a
    frozen snapshot so decisions stay deterministic within one run. A rerun
    must fit the remaining budget and must not be able to land below the
    current confidence (a strictly less trusted result is not an upgrade).
    """
    nxt = next_strategy(f.strategy)
    if nxt is None:
        raise ValueError("cannot escalate past the top strategy")
    current = effective_confidence(f, stats)
    target = config.min_confidence + config.escalation_margin
    if current >= target:
        return None
    if cost_estimate(f.rule_id, nxt) > remaining_ms:
        return None
    floor = weakest_base(f.kind, nxt, f.certainty) * (
        1.0 - fp_rate(stats, (f.rule_id, nxt))
    )
    if floor < current:
        return None
    return nxt
