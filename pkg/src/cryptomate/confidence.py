"""Confidence calibration, in one place so it can be swapped wholesale.

Base confidence is a pure function of (finding kind, strategy, certainty).
Order findings trust the strategy that produced them; constraint findings
depend only on whether the argument value could be resolved.
"""

from __future__ import annotations

STRATEGIES = ("S0", "S1", "S2")

_ORDER_TABLE = {
    ("S0", "Possible"): 0.50,
    ("S1", "Possible"): 0.70,
    ("S1", "Definite"): 0.90,
    ("S2", "Possible"): 0.85,
    ("S2", "Definite"): 0.95,
}

_CONSTRAINT_TABLE = {
    "Definite": 0.95,
    "Possible": 0.60,
}

# strongest certainty each strategy can produce, used for planning
PLANNING_CONFIDENCE = {"S0": 0.50, "S1": 0.90, "S2": 0.95}

STRATEGY_COST_SEED_MS = {"S0": 1.0, "S1": 5.0, "S2": 25.0}
COST_EMA_ALPHA = 0.3
COST_FLOOR_MS = 0.1

SEVERITY_RANK = {"error": 0, "warning": 1, "info": 2}


def base_confidence(kind: str, strategy: str, certainty: str) -> float:
    if kind == "ConstraintViolation":
        return _CONSTRAINT_TABLE[certainty]
    return _ORDER_TABLE[(strategy, certainty)]


def next_strategy(strategy: str) -> str | None:
    idx = STRATEGIES.index(strategy)
    return STRATEGIES[idx + 1] if idx + 1 < len(STRATEGIES) else None


def weakest_base(kind: str, strategy: str, certainty: str) -> float:
    """Lower bound on the base confidence a surviving rerun at ``strategy``
    can carry.

    A more precise strategy never demotes a finding it confirms at the same
    location: its per-path states are subsets of the dataflow join, so a
    Definite stays Definite (or the finding disappears, which is allowed).
    Constraint findings keep their certainty because argument resolution does
    not depend on the strategy. Hence the floor is the next strategy's value
    at the finding's current certainty.
    """
    if kind == "ConstraintViolation":
        return _CONSTRAINT_TABLE[certainty]
    return _ORDER_TABLE[(strategy, certainty)]
