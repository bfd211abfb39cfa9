"""runS2 against the AST-walking brute-force interpreter.

The full exhaustive sweep over the statement-template grammar lives in the
acceptance suite; this module runs the sweep machinery on a smaller slice
plus the handwritten nested programs so failures localize quickly.
"""

from __future__ import annotations

import itertools

from cryptomate.analysis import run_s2
from cryptomate.rules import bundled_rules_dir, load_rules
from cryptomate.syntax.cfg import build_cfg
from cryptomate.syntax.objects import extract_objects

from _support import (
    NESTED_PROGRAMS,
    OracleFinding,
    generate_programs,
    interpreter_findings,
    parse_source,
)

RULE = load_rules(bundled_rules_dir()).by_id("bc-ec-elgamal-encryptor")


def s2_findings(source: str) -> set[OracleFinding]:
    unit = parse_source(source)
    method = unit.methods[0]
    cfg = build_cfg(method)
    objects = [o for o in extract_objects(cfg) if o.class_name == RULE.class_name]
    assert len(objects) == 1
    found = run_s2(cfg, objects[0], RULE, RULE.dfa, 64, file="t.mj")
    assert not any(f.truncated for f in found), "bound too small for the sweep"
    return {OracleFinding.from_finding(f) for f in found}


def check_program(source: str) -> None:
    unit = parse_source(source)
    expected = interpreter_findings(unit.methods[0], RULE)
    actual = s2_findings(source)
    assert actual == expected, f"\n{source}\nexpected {sorted(map(repr, expected))}\ngot {sorted(map(repr, actual))}"


def test_single_item_programs_match_oracle():
    for source in generate_programs(max_items=1):
        check_program(source)


def test_two_item_program_sample_matches_oracle():
    # every 17th program of the full two-item space; the acceptance suite
    # runs the whole thing
    for source in itertools.islice(generate_programs(max_items=2), 0, None, 17):
        check_program(source)


def test_nested_programs_match_oracle():
    for source in NESTED_PROGRAMS:
        check_program(source)


def test_realloc_restarts_word():
    source = (
        "void m(boolean b, byte[] d, CipherParameters k) {\n"
        "    ECElGamalEncryptor x = new ECElGamalEncryptor();\n"
        "    x.init(k);\n"
        "    x = new ECElGamalEncryptor();\n"
        "    x.encrypt(d);\n"
        "}\n"
    )
    unit = parse_source(source)
    cfg = build_cfg(unit.methods[0])
    objects = extract_objects(cfg)
    assert len(objects) == 2
    # the second instance is used before init: a Definite IllegalTransition
    second = objects[1]
    found = run_s2(cfg, second, RULE, RULE.dfa, 64, file="t.mj")
    assert [(f.kind, f.certainty) for f in found] == [("IllegalTransition", "Definite")]
