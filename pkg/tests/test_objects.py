from __future__ import annotations

from cryptomate.syntax.cfg import build_cfg
from cryptomate.syntax.objects import extract_objects

from _support import CORPUS, parse_source


def _objects_for(source: str):
    unit = parse_source(source)
    cfg = build_cfg(unit.methods[0])
    return extract_objects(cfg), cfg


def test_single_allocation_and_call():
    objects, _ = _objects_for("void m() { A a = new A(); a.f(); }")
    assert len(objects) == 1
    obj = objects[0]
    assert obj.class_name == "A"
    assert obj.names == {"a"}
    assert obj.object_var == "a"
    assert [c.method for c in obj.call_sites] == ["f"]


def test_direct_copy_merges_names():
    objects, _ = _objects_for("void m() { A a = new A(); A b = a; b.f(); }")
    assert len(objects) == 1
    obj = objects[0]
    assert obj.names == {"a", "b"}
    assert [c.method for c in obj.call_sites] == ["f"]


def test_untracked_receiver_ignored():
    objects, _ = _objects_for("void m() { a.f(); }")
    assert objects == []


def test_rebinding_removes_alias():
    objects, _ = _objects_for(
        "void m() { A a = new A(); A b = a; b = new A(); a.f(); b.g(); }"
    )
    assert len(objects) == 2
    first, second = objects
    assert first.names == {"a"}
    assert second.names == {"b"}
    assert [c.method for c in first.call_sites] == ["f"]
    assert [c.method for c in second.call_sites] == ["g"]


def test_transitive_copies():
    objects, _ = _objects_for(
        "void m() { A a = new A(); A b = a; A c = b; c.f(); }"
    )
    (obj,) = objects
    assert obj.names == {"a", "b", "c"}
    assert [c.method for c in obj.call_sites] == ["f"]


def test_copy_of_untracked_unbinds():
    objects, _ = _objects_for(
        "void m() { A a = new A(); a = other; a.f(); }"
    )
    (obj,) = objects
    assert obj.names == set()
    assert obj.call_sites == []
    assert obj.object_var == "a"


def test_calls_inside_initializers_and_args():
    objects, _ = _objects_for(
        "void m() { A a = new A(); byte[] x = a.f(a.g()); }"
    )
    (obj,) = objects
    # inner call evaluates first
    assert [c.method for c in obj.call_sites] == ["g", "f"]
    assert objects[0].call_sites[0].seq < objects[0].call_sites[1].seq


def test_nested_new_not_tracked():
    objects, _ = _objects_for("void m() { A a = new A(new B()); }")
    assert len(objects) == 1
    assert objects[0].class_name == "A"


def test_calls_in_branch_and_loop_bodies_attributed():
    objects, _ = _objects_for(
        "void m(boolean b) { A a = new A(); if (b) { a.f(); } while (b) { a.g(); } }"
    )
    (obj,) = objects
    assert [c.method for c in obj.call_sites] == ["f", "g"]


def test_no_shared_names_across_corpus():
    """Alias sets are disjoint per method over the whole corpus."""
    from cryptomate.syntax.parser import parse
    from cryptomate.syntax.lexer import tokenize

    for path in sorted(CORPUS.rglob("*.mj")):
        unit = parse(tokenize(path.read_text(encoding="utf-8")).tokens, str(path)).unit
        for method in unit.methods:
            objects = extract_objects(build_cfg(method))
            seen: set[str] = set()
            for obj in objects:
                assert not (obj.names & seen), (path, method.name)
                seen |= obj.names
