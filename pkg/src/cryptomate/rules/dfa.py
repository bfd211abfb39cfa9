"""Compilation of ORDER expressions into deterministic finite automata.

An ORDER expression is a regular expression over event labels: identifiers
combined with `|`, grouping, `*`, `+`, `?`, and juxtaposition for
concatenation. Compilation goes through a Thompson NFA and subset
construction. The resulting DFA has a total transition function with an
explicit dead state, so a single lookup tells both "still legal" and
"irrecoverably wrong".
"""

from __future__ import annotations

from dataclasses import dataclass


class RegexSyntaxError(Exception):
    def __init__(self, position: int, message: str):
        super().__init__(f"position {position}: {message}")
        self.position = position
        self.message = message


@dataclass(frozen=True)
class Dfa:
    states: int  # state ids are 0..states-1
    start: int
    alphabet: tuple[str, ...]
    delta: dict[tuple[int, str], int]  # total over states x alphabet
    accepting: frozenset[int]
    dead: int
    required_labels: frozenset[str]

    def step(self, state: int, label: str) -> int:
        return self.delta[(state, label)]

    def run(self, word: list[str] | tuple[str, ...]) -> int:
        state = self.start
        for label in word:
            state = self.delta[(state, label)]
        return state

    def accepts(self, word: list[str] | tuple[str, ...]) -> bool:
        return self.run(word) in self.accepting


# -- ORDER expression parsing --------------------------------------------

_OPERATORS = "|()*+?"


def _lex_order(order: str) -> list[tuple[str, str, int]]:
    """Tokens are (type, text, position); type is 'label' or the operator."""
    out: list[tuple[str, str, int]] = []
    i = 0
    n = len(order)
    while i < n:
        ch = order[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch in _OPERATORS:
            out.append((ch, ch, i))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (order[j].isalnum() or order[j] == "_"):
                j += 1
            out.append(("label", order[i:j], i))
            i = j
            continue
        raise RegexSyntaxError(i, f"unexpected character {ch!r}")
    return out


# AST: ("label", name) | ("concat", [..]) | ("union", [..])
#      | ("star", node) | ("plus", node) | ("opt", node)


class _OrderParser:
    def __init__(self, order: str, alphabet: frozenset[str]):
        self.tokens = _lex_order(order)
        self.pos = 0
        self.alphabet = alphabet
        self.length = len(order)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def parse(self):
        if not self.tokens:
            raise RegexSyntaxError(0, "empty expression")
        node = self.union()
        if self.peek() is not None:
            _, text, pos = self.peek()
            raise RegexSyntaxError(pos, f"unexpected {text!r}")
        return node

    def union(self):
        parts = [self.concat()]
        while self.peek() is not None and self.peek()[0] == "|":
            self.pos += 1
            parts.append(self.concat())
        return parts[0] if len(parts) == 1 else ("union", parts)

    def concat(self):
        parts = [self.repeat()]
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in ("label", "("):
                break
            parts.append(self.repeat())
        return parts[0] if len(parts) == 1 else ("concat", parts)

    def repeat(self):
        node = self.atom()
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in ("*", "+", "?"):
                return node
            self.pos += 1
            node = ({"*": "star", "+": "plus", "?": "opt"}[tok[0]], node)

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise RegexSyntaxError(self.length, "unexpected end of expression")
        kind, text, pos = tok
        if kind == "label":
            if text not in self.alphabet:
                raise RegexSyntaxError(pos, f"undefined label {text}")
            self.pos += 1
            return ("label", text)
        if kind == "(":
            self.pos += 1
            node = self.union()
            closing = self.peek()
            if closing is None or closing[0] != ")":
                raise RegexSyntaxError(pos, "unclosed group")
            self.pos += 1
            return node
        raise RegexSyntaxError(pos, f"unexpected {text!r}")


# -- Thompson construction -------------------------------------------------


class _Nfa:
    def __init__(self):
        self.transitions: list[dict[str, set[int]]] = []
        self.eps: list[set[int]] = []

    def new_state(self) -> int:
        self.transitions.append({})
        self.eps.append(set())
        return len(self.eps) - 1

    def add(self, src: int, label: str, dst: int) -> None:
        self.transitions[src].setdefault(label, set()).add(dst)

    def add_eps(self, src: int, dst: int) -> None:
        self.eps[src].add(dst)

    def closure(self, states: frozenset[int]) -> frozenset[int]:
        seen = set(states)
        stack = list(states)
        while stack:
            for nxt in self.eps[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)

    def move(self, states: frozenset[int], label: str) -> frozenset[int]:
        out: set[int] = set()
        for s in states:
            out |= self.transitions[s].get(label, set())
        return frozenset(out)


def _build_nfa(node, nfa: _Nfa) -> tuple[int, int]:
    kind = node[0]
    if kind == "label":
        start, end = nfa.new_state(), nfa.new_state()
        nfa.add(start, node[1], end)
        return start, end
    if kind == "concat":
        first_start, prev_end = _build_nfa(node[1][0], nfa)
        for part in node[1][1:]:
            start, end = _build_nfa(part, nfa)
            nfa.add_eps(prev_end, start)
            prev_end = end
        return first_start, prev_end
    if kind == "union":
        start, end = nfa.new_state(), nfa.new_state()
        for part in node[1]:
            s, e = _build_nfa(part, nfa)
            nfa.add_eps(start, s)
            nfa.add_eps(e, end)
        return start, end
    if kind == "star":
        inner_s, inner_e = _build_nfa(node[1], nfa)
        start, end = nfa.new_state(), nfa.new_state()
        nfa.add_eps(start, inner_s)
        nfa.add_eps(start, end)
        nfa.add_eps(inner_e, inner_s)
        nfa.add_eps(inner_e, end)
        return start, end
    if kind == "plus":
        inner_s, inner_e = _build_nfa(node[1], nfa)
        start, end = nfa.new_state(), nfa.new_state()
        nfa.add_eps(start, inner_s)
        nfa.add_eps(inner_e, inner_s)
        nfa.add_eps(inner_e, end)
        return start, end
    assert kind == "opt"
    inner_s, inner_e = _build_nfa(node[1], nfa)
    start, end = nfa.new_state(), nfa.new_state()
    nfa.add_eps(start, inner_s)
    nfa.add_eps(start, end)
    nfa.add_eps(inner_e, end)
    return start, end


def compile_order(order: str, alphabet: set[str] | frozenset[str]) -> Dfa:
    """Compile an ORDER expression over ``alphabet`` into a total DFA.

    State 0 is the start; states are numbered in BFS discovery order over
    the sorted alphabet, and the dead state is always the last id (appended
    even when unreachable, so the transition function is total by
    construction).
    """
    labels = tuple(sorted(alphabet))
    ast = _OrderParser(order, frozenset(alphabet)).parse()
    nfa = _Nfa()
    nfa_start, nfa_accept = _build_nfa(ast, nfa)

    start_set = nfa.closure(frozenset({nfa_start}))
    ids: dict[frozenset[int], int] = {start_set: 0}
    order_of: list[frozenset[int]] = [start_set]
    raw_delta: dict[tuple[int, str], int] = {}
    queue = [start_set]
    while queue:
        current = queue.pop(0)
        cur_id = ids[current]
        for label in labels:
            nxt = nfa.closure(nfa.move(current, label))
            if nxt not in ids:
                ids[nxt] = len(order_of)
                order_of.append(nxt)
                queue.append(nxt)
            raw_delta[(cur_id, label)] = ids[nxt]

    empty = frozenset()
    if empty in ids:
        dead = ids[empty]
        total_states = len(order_of)
    else:
        dead = len(order_of)
        total_states = dead + 1
        for label in labels:
            raw_delta[(dead, label)] = dead

    accepting = frozenset(
        ids[s] for s in order_of if nfa_accept in s
    )
    dfa = Dfa(
        states=total_states,
        start=0,
        alphabet=labels,
        delta=raw_delta,
        accepting=accepting,
        dead=dead,
        required_labels=frozenset(),
    )
    return Dfa(
        states=dfa.states,
        start=dfa.start,
        alphabet=dfa.alphabet,
        delta=dfa.delta,
        accepting=dfa.accepting,
        dead=dfa.dead,
        required_labels=required_labels(dfa),
    )


def required_labels(dfa: Dfa) -> frozenset[str]:
    """Labels that occur in every accepted word.

    A label is required exactly when removing all of its transitions makes
    the accepting states unreachable from the start state.
    """
    required: set[str] = set()
    for label in dfa.alphabet:
        seen = {dfa.start}
        stack = [dfa.start]
        reachable = dfa.start in dfa.accepting
        while stack and not reachable:
            state = stack.pop()
            for other in dfa.alphabet:
                if other == label:
                    continue
                nxt = dfa.delta[(state, other)]
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
                    if nxt in dfa.accepting:
                        reachable = True
                        break
        if not reachable:
            required.add(label)
    return frozenset(required)
