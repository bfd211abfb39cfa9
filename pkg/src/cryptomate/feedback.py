"""Developer verdict store with Laplace-smoothed false-positive rates.

Verdicts accumulate per finding fingerprint. Rates are queried at two
granularities: per fingerprint (drives learned suppression) and per
(rule, strategy) pair (drives strategy selection). Repeat verdicts are
counted, deliberately: frequency is the signal.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

STORE_VERSION = 1
DEFAULT_STORE_PATH = ".cryptomate/feedback.json"


class StoreCorrupt(Exception):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


@dataclass(frozen=True)
class Verdict:
    verdict: str  # fp | tp
    strategy: str
    at: str  # ISO-8601 UTC


@dataclass
class FeedbackRecord:
    rule_id: str
    verdicts: list[Verdict] = field(default_factory=list)


@dataclass
class FeedbackStore:
    version: int = STORE_VERSION
    records: dict[str, FeedbackRecord] = field(default_factory=dict)


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def record_verdict(
    store: FeedbackStore,
    fingerprint: str,
    verdict: str,
    rule_id: str,
    strategy: str,
    at: str | None = None,
) -> FeedbackStore:
    if verdict not in ("fp", "tp"):
        raise ValueError(f"verdict must be 'fp' or 'tp', got {verdict!r}")
    record = store.records.get(fingerprint)
    if record is None:
        record = FeedbackRecord(rule_id=rule_id)
        store.records[fingerprint] = record
    record.verdicts.append(Verdict(verdict, strategy, at or _now_iso()))
    return store


def _matching_verdicts(store: FeedbackStore, key) -> list[Verdict]:
    if isinstance(key, str):
        record = store.records.get(key)
        return list(record.verdicts) if record else []
    rule_id, strategy = key
    out: list[Verdict] = []
    for record in store.records.values():
        if record.rule_id != rule_id:
            continue
        out.extend(v for v in record.verdicts if v.strategy == strategy)
    return out


def fp_rate(store: FeedbackStore, key) -> float:
    """Smoothed rate (fp + 1) / (n + 2); ``key`` is a fingerprint string or
    a (rule_id, strategy) tuple. No verdicts yields the 0.5 prior."""
    verdicts = _matching_verdicts(store, key)
    fp = sum(1 for v in verdicts if v.verdict == "fp")
    return (fp + 1) / (len(verdicts) + 2)


def verdict_count(store: FeedbackStore, fingerprint: str) -> int:
    record = store.records.get(fingerprint)
    return len(record.verdicts) if record else 0


# -- persistence -------------------------------------------------------------


def _to_json(store: FeedbackStore) -> dict:
    return {
        "version": store.version,
        "records": {
            fp: {
                "rule_id": rec.rule_id,
                "verdicts": [
                    {"verdict": v.verdict, "strategy": v.strategy, "at": v.at}
                    for v in rec.verdicts
                ],
            }
            for fp, rec in sorted(store.records.items())
        },
    }


def _from_json(data, path: str) -> FeedbackStore:
    try:
        if data["version"] != STORE_VERSION:
            raise StoreCorrupt(path, f"unsupported version {data['version']!r}")
        store = FeedbackStore()
        for fp, raw in data["records"].items():
            record = FeedbackRecord(rule_id=raw["rule_id"])
            for v in raw["verdicts"]:
                if v["verdict"] not in ("fp", "tp"):
                    raise StoreCorrupt(path, f"bad verdict {v['verdict']!r}")
                record.verdicts.append(Verdict(v["verdict"], v["strategy"], v["at"]))
            store.records[fp] = record
        return store
    except (KeyError, TypeError, AttributeError) as exc:
        raise StoreCorrupt(path, f"malformed store: {exc}") from exc


def load_store(path: str | Path) -> FeedbackStore:
    """Load a store; a missing file is an empty store, malformed JSON raises."""
    path = Path(path)
    if not path.exists():
        return FeedbackStore()
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise StoreCorrupt(str(path), str(exc)) from exc
    return _from_json(data, str(path))


def load_store_with_recovery(path: str | Path) -> tuple[FeedbackStore, str | None]:
    """Like :func:`load_store`, but a corrupt file is moved aside to
    ``<path>.bad`` and replaced by an empty store. Returns (store, warning)."""
    try:
        return load_store(path), None
    except StoreCorrupt as exc:
        bad = str(path) + ".bad"
        try:
            os.replace(str(path), bad)
        except OSError:
            pass
        return FeedbackStore(), f"{exc}; backed up to {bad}"


def save_store(store: FeedbackStore, path: str | Path) -> None:
    """Atomic save: write a temp file next to the target, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(
        json.dumps(_to_json(store), indent=2, sort_keys=False) + "\n",
        encoding="utf-8",
    )
    os.replace(tmp, path)
