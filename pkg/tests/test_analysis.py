from __future__ import annotations

import pytest

from cryptomate.analysis import (
    check_constraints,
    object_events,
    run_s0,
    run_s1,
    run_s2,
    run_strategy,
    sort_key,
)
from cryptomate.rules import bundled_rules_dir, load_rules
from cryptomate.syntax.cfg import build_cfg
from cryptomate.syntax.objects import extract_objects

from _support import parse_source

RULES = load_rules(bundled_rules_dir())
ENCRYPTOR = RULES.by_id("bc-ec-elgamal-encryptor")
KEYGEN = RULES.by_id("weak-key-size")
CIPHER = RULES.by_id("weak-cipher-name")

HEADER = "void m(boolean b, byte[] d, CipherParameters k) {"


def scenario(body: str, rule=ENCRYPTOR):
    source = HEADER + "\n" + body + "\n}\n"
    unit = parse_source(source)
    cfg = build_cfg(unit.methods[0])
    objects = [o for o in extract_objects(cfg) if o.class_name == rule.class_name]
    assert len(objects) == 1, objects
    return cfg, objects[0]


ALLOC = "    ECElGamalEncryptor x = new ECElGamalEncryptor();"


class TestS0:
    def test_missing_required_init(self):
        cfg, obj = scenario(ALLOC + "\n    x.encrypt(d);")
        findings = run_s0(obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        assert len(findings) == 1
        f = findings[0]
        assert f.kind == "IncompleteLifecycle"
        assert f.certainty == "Possible"
        assert f.strategy == "S0"
        assert f.base_confidence == 0.50
        assert f.context["method"] == "init"

    def test_all_required_present(self):
        cfg, obj = scenario(ALLOC + "\n    x.init(k);\n    x.encrypt(d);")
        assert run_s0(obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj") == []

    def test_silent_without_mapped_events(self):
        # unmapped calls only: constructor of the wrong arity is no event
        cfg, obj = scenario("    ECElGamalEncryptor x = new ECElGamalEncryptor(d);")
        assert object_events(obj, ENCRYPTOR) == []
        assert run_s0(obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj") == []


class TestS1:
    def test_straight_line_definite(self):
        cfg, obj = scenario(ALLOC + "\n    byte[] out = x.encrypt(d);")
        findings = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        assert len(findings) == 1
        f = findings[0]
        assert (f.kind, f.certainty, f.strategy) == (
            "IllegalTransition",
            "Definite",
            "S1",
        )
        assert f.base_confidence == 0.90
        assert f.span.start_line == 3  # the encrypt call line

    def test_branch_makes_possible(self):
        # states at the call merge {after-c, after-ci}: checked by hand
        cfg, obj = scenario(
            ALLOC + "\n    if (b) {\n        x.init(k);\n    }\n    x.encrypt(d);"
        )
        findings = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        assert [f.kind for f in findings] == ["IllegalTransition"]
        assert findings[0].certainty == "Possible"
        assert findings[0].base_confidence == 0.70

    def test_clean_lifecycle(self):
        cfg, obj = scenario(ALLOC + "\n    x.init(k);\n    x.encrypt(d);")
        assert run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj") == []

    def test_incomplete_definite_when_singleton(self):
        cfg, obj = scenario(ALLOC)
        findings = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        assert [f.kind for f in findings] == ["IncompleteLifecycle"]
        assert findings[0].certainty == "Definite"
        assert findings[0].span.start_line == 2  # anchored at the declaration

    def test_incomplete_possible_when_state_set_widens(self):
        cfg, obj = scenario(ALLOC + "\n    if (b) {\n        x.init(k);\n    }")
        findings = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        # exit set {after-c, after-ci}: after-ci accepts, so nothing reported
        assert findings == []

    def test_no_cascade_after_total_death(self):
        cfg, obj = scenario(ALLOC + "\n    x.encrypt(d);\n    x.encrypt(d);")
        findings = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        assert len(findings) == 1
        assert findings[0].span.start_line == 3  # first encrypt only

    def test_loop_fixpoint(self):
        cfg, obj = scenario(
            ALLOC + "\n    x.init(k);\n    while (b) {\n        x.encrypt(d);\n    }"
        )
        assert run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj") == []


class TestS2:
    def test_branchy_possible(self):
        cfg, obj = scenario(
            ALLOC + "\n    if (b) {\n        x.init(k);\n    }\n    x.encrypt(d);"
        )
        findings = run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        kinds = {(f.kind, f.certainty) for f in findings}
        assert ("IllegalTransition", "Possible") in kinds

    def test_both_branches_init_clean(self):
        cfg, obj = scenario(
            ALLOC
            + "\n    if (b) {\n        x.init(k);\n    } else {\n        x.init(k);\n    }\n    x.encrypt(d);"
        )
        assert run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj") == []

    def test_straight_line_definite(self):
        cfg, obj = scenario(ALLOC + "\n    x.encrypt(d);")
        findings = run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
        assert len(findings) == 1
        assert findings[0].certainty == "Definite"
        assert findings[0].base_confidence == 0.95

    def test_truncation_marks_possible(self):
        cfg, obj = scenario(ALLOC + "\n    x.encrypt(d);")
        findings = run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, 1, file="t.mj")
        assert findings
        assert all(f.truncated for f in findings)
        assert all(f.certainty == "Possible" for f in findings)

    def test_path_bound_precondition(self):
        cfg, obj = scenario(ALLOC)
        with pytest.raises(AssertionError):
            run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, 0, file="t.mj")


class TestConstraints:
    def _keygen(self, body: str):
        source = "void m(int fromConfig) {\n" + body + "\n}\n"
        unit = parse_source(source)
        cfg = build_cfg(unit.methods[0])
        (obj,) = extract_objects(cfg)
        return cfg, obj

    def test_small_literal_definite(self):
        cfg, obj = self._keygen(
            "    KeyPairGenerator g = new KeyPairGenerator();\n    g.init(1024);"
        )
        findings = check_constraints(cfg, obj, KEYGEN, file="t.mj", strategy="S1")
        assert len(findings) == 1
        f = findings[0]
        assert (f.kind, f.certainty) == ("ConstraintViolation", "Definite")
        assert f.base_confidence == 0.95
        assert f.context["arg"] == "1024"

    def test_large_literal_passes(self):
        cfg, obj = self._keygen(
            "    KeyPairGenerator g = new KeyPairGenerator();\n    g.init(4096);"
        )
        assert check_constraints(cfg, obj, KEYGEN, file="t.mj", strategy="S1") == []

    def test_unresolvable_possible(self):
        cfg, obj = self._keygen(
            "    KeyPairGenerator g = new KeyPairGenerator();\n    g.init(fromConfig);"
        )
        findings = check_constraints(cfg, obj, KEYGEN, file="t.mj", strategy="S1")
        assert len(findings) == 1
        assert findings[0].certainty == "Possible"
        assert findings[0].base_confidence == 0.60
        assert findings[0].context["arg"] is None

    def test_single_literal_assignment_resolves(self):
        cfg, obj = self._keygen(
            "    int bits = 1024;\n"
            "    KeyPairGenerator g = new KeyPairGenerator();\n"
            "    g.init(bits);"
        )
        findings = check_constraints(cfg, obj, KEYGEN, file="t.mj", strategy="S1")
        assert findings[0].certainty == "Definite"

    def test_two_assignments_unresolvable(self):
        cfg, obj = self._keygen(
            "    int bits = 1024;\n"
            "    bits = 4096;\n"
            "    KeyPairGenerator g = new KeyPairGenerator();\n"
            "    g.init(bits);"
        )
        findings = check_constraints(cfg, obj, KEYGEN, file="t.mj", strategy="S1")
        assert findings[0].certainty == "Possible"

    def test_string_deny(self):
        source = (
            'void m(byte[] d) {\n'
            '    StreamCipherFactory f = new StreamCipherFactory("DES");\n'
            "    byte[] out = f.process(d);\n}\n"
        )
        unit = parse_source(source)
        cfg = build_cfg(unit.methods[0])
        (obj,) = extract_objects(cfg)
        findings = check_constraints(cfg, obj, CIPHER, file="t.mj", strategy="S2")
        assert len(findings) == 1
        assert findings[0].certainty == "Definite"
        assert findings[0].context["arg"] == "DES"

    def test_type_mismatch_is_possible(self):
        cfg, obj = self._keygen(
            '    KeyPairGenerator g = new KeyPairGenerator();\n    g.init("big");'
        )
        findings = check_constraints(cfg, obj, KEYGEN, file="t.mj", strategy="S1")
        assert findings[0].certainty == "Possible"


class TestLadderAndDeterminism:
    def test_determinism_byte_for_byte(self):
        cfg, obj = scenario(
            ALLOC + "\n    if (b) {\n        x.init(k);\n    }\n    x.encrypt(d);"
        )
        first = run_strategy("S2", cfg, obj, ENCRYPTOR, file="t.mj")
        second = run_strategy("S2", cfg, obj, ENCRYPTOR, file="t.mj")
        assert repr(first) == repr(second)
        assert [sort_key(f) for f in first] == sorted(sort_key(f) for f in first)

    def test_definite_s1_reported_by_s2_loop_free(self):
        bodies = [
            ALLOC + "\n    x.encrypt(d);",
            ALLOC,
            ALLOC + "\n    x.encrypt(d);\n    x.init(k);",
            ALLOC + "\n    if (b) {\n        x.encrypt(d);\n    } else {\n        x.encrypt(d);\n    }",
        ]
        for body in bodies:
            cfg, obj = scenario(body)
            s1 = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
            s2 = run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
            s2_keys = {(f.kind, f.span) for f in s2}
            for f in s1:
                if f.certainty == "Definite":
                    assert (f.kind, f.span) in s2_keys, body

    def test_definite_s2_reported_by_s1(self):
        bodies = [
            ALLOC + "\n    x.encrypt(d);",
            ALLOC,
            ALLOC + "\n    while (b) {\n        x.encrypt(d);\n    }",
        ]
        for body in bodies:
            cfg, obj = scenario(body)
            s1 = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
            s2 = run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
            s1_keys = {(f.kind, f.span) for f in s1}
            for f in s2:
                if f.certainty == "Definite":
                    assert (f.kind, f.span) in s1_keys, body

    def test_s2_silent_implies_no_definite_s1(self):
        bodies = [
            ALLOC + "\n    x.init(k);\n    x.encrypt(d);",
            ALLOC + "\n    if (b) {\n        x.init(k);\n    }",
        ]
        for body in bodies:
            cfg, obj = scenario(body)
            if run_s2(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj"):
                continue
            s1 = run_s1(cfg, obj, ENCRYPTOR, ENCRYPTOR.dfa, file="t.mj")
            assert all(f.certainty != "Definite" for f in s1), body
