"""Control-flow graphs for MiniJava-CF method bodies.

Shape conventions:

* one node per simple statement (VarDecl, Assign, ExprStmt, Return), plus a
  `cond` node for each `if`/`while` condition and synthetic entry/exit nodes;
* no explicit join node: both branch tails edge straight to the successor
  statement, so `if (b) { s1; } else { s2; }` alone in a body yields exactly
  5 nodes (entry, cond, then-stmt, else-stmt, exit) and 5 edges;
* `if`/`while` condition nodes carry `then`/`else` edge labels, a `while`
  back-edge is labeled `loop`;
* statements that can never execute (after a `return`, or after an
  `if`/`else` whose branches both return) get no node at all, which keeps
  every node reachable from entry and exit reachable from every node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import Expr, If, MethodDecl, Return, Span, Stmt, While


@dataclass(frozen=True)
class CfgNode:
    id: int
    kind: str  # entry | exit | stmt | cond
    stmt: Stmt | None = None
    cond: Expr | None = None

    @property
    def span(self) -> Span | None:
        if self.stmt is not None:
            return self.stmt.span
        return None


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    label: str | None  # then | else | loop | None


@dataclass
class Cfg:
    method: MethodDecl
    nodes: list[CfgNode] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    entry: int = 0
    exit: int = -1

    def successors(self, node_id: int) -> list[Edge]:
        return self._succs[node_id]

    def predecessors(self, node_id: int) -> list[Edge]:
        return self._preds[node_id]

    def freeze(self) -> None:
        self._succs: dict[int, list[Edge]] = {n.id: [] for n in self.nodes}
        self._preds: dict[int, list[Edge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            self._succs[e.src].append(e)
            self._preds[e.dst].append(e)


# frontier item: a node waiting for its next outgoing edge, with the label
# that edge must carry (then/else for dangling branch arms, else None)
_Frontier = list[tuple[int, str | None]]


class _Builder:
    def __init__(self, method: MethodDecl):
        self.cfg = Cfg(method)
        self.return_nodes: list[int] = []

    def new_node(self, kind: str, stmt: Stmt | None = None, cond: Expr | None = None) -> int:
        node = CfgNode(len(self.cfg.nodes), kind, stmt, cond)
        self.cfg.nodes.append(node)
        return node.id

    def connect(self, frontier: _Frontier, dst: int, fallback: str | None = None) -> None:
        for src, label in frontier:
            self.cfg.edges.append(Edge(src, dst, label if label is not None else fallback))

    def build(self) -> Cfg:
        entry = self.new_node("entry")
        frontier: _Frontier = [(entry, None)]
        frontier = self.build_block(self.cfg.method.body, frontier)
        exit_id = self.new_node("exit")
        self.cfg.exit = exit_id
        self.connect(frontier, exit_id)
        for ret in self.return_nodes:
            self.cfg.edges.append(Edge(ret, exit_id, None))
        self.cfg.freeze()
        return self.cfg

    def build_block(self, stmts: tuple[Stmt, ...], frontier: _Frontier) -> _Frontier:
        for stmt in stmts:
            if not frontier:
                break  # unreachable tail, no nodes emitted
            frontier = self.build_stmt(stmt, frontier)
        return frontier

    def build_stmt(self, stmt: Stmt, frontier: _Frontier) -> _Frontier:
        if isinstance(stmt, If):
            cond = self.new_node("cond", stmt, stmt.cond)
            self.connect(frontier, cond)
            then_frontier = self.build_branch(stmt.then_body, cond, "then")
            if stmt.else_body is not None:
                else_frontier = self.build_branch(stmt.else_body, cond, "else")
            else:
                else_frontier = [(cond, "else")]
            return then_frontier + else_frontier
        if isinstance(stmt, While):
            header = self.new_node("cond", stmt, stmt.cond)
            self.connect(frontier, header)
            if stmt.body:
                body_frontier = self.build_branch(stmt.body, header, "then")
                # close the loop; a dangling branch label wins over "loop" so
                # a branch edge doubling as the back-edge stays then/else
                self.connect(body_frontier, header, fallback="loop")
            else:
                self.cfg.edges.append(Edge(header, header, "loop"))
            return [(header, "else")]
        if isinstance(stmt, Return):
            node = self.new_node("stmt", stmt)
            self.connect(frontier, node)
            self.return_nodes.append(node)
            return []
        node = self.new_node("stmt", stmt)
        self.connect(frontier, node)
        return [(node, None)]

    def build_branch(self, stmts: tuple[Stmt, ...], cond: int, label: str) -> _Frontier:
        if not stmts:
            return [(cond, label)]
        first = stmts[0]
        frontier = self.build_stmt(first, [(cond, label)])
        return self.build_block(stmts[1:], frontier)


def build_cfg(method: MethodDecl) -> Cfg:
    """Build the control-flow graph of one method."""
    return _Builder(method).build()
