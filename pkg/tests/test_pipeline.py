from __future__ import annotations

import random

from cryptomate.analysis import sort_key
from cryptomate.feedback import FeedbackStore, record_verdict
from cryptomate.pipeline import AnalysisSession, analyze_source, finding_json
from cryptomate.rules import bundled_rules_dir, load_rules
from cryptomate.scheduler import AnalysisConfig

from _support import CORPUS

RULES = load_rules(bundled_rules_dir())
FIG1 = (CORPUS / "fig1.mj").read_text(encoding="utf-8")
FIG1_FIXED = (CORPUS / "fig1_fixed.mj").read_text(encoding="utf-8")


def test_fig1_exactly_one_finding():
    result = analyze_source("corpus/fig1.mj", FIG1, RULES)
    assert len(result.notifications) == 1
    f = result.notifications[0].finding
    assert f.rule_id == "bc-ec-elgamal-encryptor"
    assert f.kind == "IllegalTransition"
    assert f.certainty == "Definite"
    assert "encrypt" in result.notifications[0].title


def test_fig1_fixed_is_clean():
    result = analyze_source("corpus/fig1_fixed.mj", FIG1_FIXED, RULES)
    assert result.notifications == []


def test_results_are_deterministic():
    a = analyze_source("corpus/fig1.mj", FIG1, RULES)
    b = analyze_source("corpus/fig1.mj", FIG1, RULES)
    assert [finding_json(n) for n in a.notifications] == [
        finding_json(n) for n in b.notifications
    ]
    assert repr(a.notifications) == repr(b.notifications)


def test_findings_sorted_by_location_then_rule():
    source = (CORPUS / "weak_params.mj").read_text(encoding="utf-8")
    result = analyze_source("weak_params.mj", source, RULES)
    keys = [sort_key(n.finding) for n in result.notifications]
    assert keys == sorted(keys)


def test_never_silent_at_one_millisecond():
    config = AnalysisConfig(budget_ms=1)
    source = (CORPUS / "bench" / "bench_000.mj").read_text(encoding="utf-8")
    result = analyze_source("bench_000.mj", source, RULES, config)
    assert result.executed
    assert all(t.strategy in ("S0", "S1", "S2") for t in result.executed)
    # every applicable (rule, object) pair must have been analyzed
    from cryptomate.syntax.cfg import build_cfg
    from cryptomate.syntax.lexer import tokenize
    from cryptomate.syntax.objects import extract_objects
    from cryptomate.syntax.parser import parse

    unit = parse(tokenize(source).tokens).unit
    expected_pairs = 0
    for method in unit.methods:
        for obj in extract_objects(build_cfg(method)):
            expected_pairs += len(RULES.for_class(obj.class_name))
    assert len(result.executed) == expected_pairs


def _levels(result) -> dict[tuple[str, str, str], int]:
    order = {"S0": 0, "S1": 1, "S2": 2}
    return {
        (t.rule_id, t.method_name, t.object_var): order[t.strategy]
        for t in result.executed
    }


def _random_store(rng: random.Random) -> FeedbackStore:
    store = FeedbackStore()
    for rule_id in ("bc-ec-elgamal-encryptor", "weak-key-size", "weak-cipher-name"):
        for strategy in ("S0", "S1", "S2"):
            for _ in range(rng.randint(0, 6)):
                record_verdict(
                    store,
                    format(rng.getrandbits(64), "016x"),
                    rng.choice(["fp", "tp"]),
                    rule_id,
                    strategy,
                )
    return store


def test_budget_monotonicity_and_escalation_soundness_random_triples():
    """Raising the budget may only refine: strategy levels never drop, and a
    finding can only vanish because its pair re-ran at a higher level.
    Escalations never land below the confidence they replaced."""
    from cryptomate.scheduler import effective_confidence

    rng = random.Random(4242)
    bench = sorted((CORPUS / "bench").glob("*.mj"))
    checked = 0
    for _ in range(120):
        path = rng.choice(bench)
        source = path.read_text(encoding="utf-8")
        store = _random_store(rng)
        low = rng.randint(1, 120)
        high = low + rng.randint(1, 400)
        result_low = analyze_source(
            str(path), source, RULES, AnalysisConfig(budget_ms=low), store=store
        )
        result_high = analyze_source(
            str(path), source, RULES, AnalysisConfig(budget_ms=high), store=store
        )
        levels_low, levels_high = _levels(result_low), _levels(result_high)
        assert levels_low.keys() == levels_high.keys()
        for pair, level in levels_low.items():
            assert levels_high[pair] >= level, (path, pair, low, high)

        low_keys = {sort_key(f) for f in result_low.findings}
        for n in result_high.notifications:
            f = n.finding
            pair = (f.rule_id, f.method_name, f.object_var)
            if levels_high[pair] == levels_low[pair]:
                assert sort_key(f) in low_keys, (path, low, high, f)
        high_by_pair = {
            pair for pair, lvl in levels_high.items() if lvl > levels_low[pair]
        }
        for f in result_low.findings:
            key = sort_key(f)
            pair = (f.rule_id, f.method_name, f.object_var)
            still = {sort_key(g) for g in result_high.findings}
            if key not in still:
                assert pair in high_by_pair, (path, low, high, f)

        for result in (result_low, result_high):
            for esc in result.escalations:
                before_keys = {
                    (g.kind, g.span): g for g in esc.before if g.strategy == esc.from_strategy
                }
                for g in esc.after:
                    if g.truncated:
                        continue  # degraded by the path bound, exempt by design
                    match = before_keys.get((g.kind, g.span))
                    if match is not None:
                        assert effective_confidence(g, store) >= effective_confidence(
                            match, store
                        ) - 1e-9, (path, esc)
        checked += 1
    assert checked == 120


def test_escalation_replaces_lower_strategy_findings():
    source = (
        "void m(boolean b, byte[] d, CipherParameters k) {\n"
        "    ECElGamalEncryptor x = new ECElGamalEncryptor();\n"
        "    x.encrypt(d);\n"
        "}\n"
    )
    store = FeedbackStore()
    for strategy in ("S0", "S1", "S2"):
        for i in range(8):
            record_verdict(store, f"{i}{strategy}", "tp", "bc-ec-elgamal-encryptor", strategy)
    config = AnalysisConfig(budget_ms=10_000, min_confidence=0.5, escalation_margin=0.45)
    result = analyze_source("t.mj", source, RULES, config, store=store)
    # chosen S1 (0.81 >= 0.5), then escalated: target 0.95 exceeds S1's 0.81
    assert result.escalations
    assert result.executed[0].strategy == "S2"
    assert all(f.strategy == "S2" for f in result.findings)


def test_session_shares_cost_model_across_documents():
    session = AnalysisSession(RULES)
    before = session.cost.estimate("bc-ec-elgamal-encryptor", "S2")
    session.analyze("corpus/fig1.mj", FIG1)
    after = session.cost.estimate("bc-ec-elgamal-encryptor", "S2")
    assert after != before  # observed timings fed the moving average


def test_parse_error_still_reports_good_methods():
    source = (
        "void broken() { int x = ; }\n"
        "void ok(byte[] d) {\n"
        "    ECElGamalEncryptor x = new ECElGamalEncryptor();\n"
        "    x.encrypt(d);\n"
        "}\n"
    )
    result = analyze_source("t.mj", source, RULES)
    assert result.parse_diagnostics
    assert len(result.notifications) == 1


def test_cli_json_schema_field_order():
    result = analyze_source("corpus/fig1.mj", FIG1, RULES)
    payload = finding_json(result.notifications[0])
    assert list(payload.keys()) == [
        "rule_id",
        "file",
        "line",
        "col",
        "end_line",
        "end_col",
        "kind",
        "severity",
        "strategy",
        "certainty",
        "confidence",
        "message",
        "fingerprint",
        "suppressed",
    ]
