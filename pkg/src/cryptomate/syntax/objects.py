"""Tracked-object extraction.

A tracked object is a `new T(...)` allocation bound directly to a local
variable. Aliasing is deliberately shallow: only direct variable-to-variable
copies (`A b = a;` / `b = a;`) extend an object's name set, and rebinding a
name to a fresh allocation removes it from the previous object. Receivers
that were never allocated locally are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .ast import (
    Assign,
    Expr,
    ExprStmt,
    MethodCall,
    NewExpr,
    Return,
    Span,
    VarDecl,
    VarRef,
)
from .cfg import Cfg, CfgNode


@dataclass(frozen=True)
class CallOccurrence:
    """One method call or allocation inside a statement, in evaluation order."""

    node_id: int
    seq: int  # position within the node's evaluation order
    is_new: bool
    receiver: str | None  # call receiver; None for allocations
    name: str  # method name, or class name for allocations
    args: tuple[Expr, ...]
    span: Span
    is_binding: bool = False  # allocation appearing directly as a decl/assign rhs


@dataclass(frozen=True)
class CallSite:
    node_id: int
    seq: int
    method: str
    args: tuple[Expr, ...]
    span: Span


@dataclass
class TrackedObject:
    class_name: str
    method_name: str
    object_var: str  # name bound at the allocation; stable even if rebound
    alloc_node: int
    alloc_seq: int
    alloc_span: Span  # span of the declaring statement
    alloc_args: tuple[Expr, ...]
    names: set[str] = field(default_factory=set)
    call_sites: list[CallSite] = field(default_factory=list)


def _walk_expr(expr: Expr, emit, binding_root: bool) -> None:
    if isinstance(expr, NewExpr):
        for arg in expr.args:
            _walk_expr(arg, emit, False)
        emit(expr, binding_root)
    elif isinstance(expr, MethodCall):
        for arg in expr.args:
            _walk_expr(arg, emit, False)
        emit(expr, False)


def node_calls(node: CfgNode) -> Iterator[CallOccurrence]:
    """Yield a node's allocations and calls in evaluation order.

    Arguments are evaluated left to right before the enclosing call or
    allocation, matching Java evaluation order.
    """
    occurrences: list[CallOccurrence] = []
    seq = 0

    def emit(expr: Expr, is_binding: bool) -> None:
        nonlocal seq
        if isinstance(expr, NewExpr):
            occurrences.append(
                CallOccurrence(
                    node.id, seq, True, None, expr.class_name, expr.args,
                    expr.span, is_binding,
                )
            )
        else:
            assert isinstance(expr, MethodCall)
            occurrences.append(
                CallOccurrence(
                    node.id, seq, False, expr.receiver, expr.method, expr.args,
                    expr.span,
                )
            )
        seq += 1

    if node.kind == "cond":
        assert node.cond is not None
        _walk_expr(node.cond, emit, False)
    elif node.kind == "stmt":
        stmt = node.stmt
        if isinstance(stmt, VarDecl) and stmt.init is not None:
            _walk_expr(stmt.init, emit, True)
        elif isinstance(stmt, Assign):
            _walk_expr(stmt.value, emit, True)
        elif isinstance(stmt, ExprStmt):
            _walk_expr(stmt.call, emit, False)
        elif isinstance(stmt, Return) and stmt.value is not None:
            _walk_expr(stmt.value, emit, False)
    yield from occurrences


def extract_objects(cfg: Cfg) -> list[TrackedObject]:
    """Collect the tracked objects of one method.

    Nodes are visited in id order, which equals source order, so the binding
    environment follows the program text; branch-sensitivity is out of scope
    at desk scale.
    """
    objects: list[TrackedObject] = []
    env: dict[str, TrackedObject] = {}
    method_name = cfg.method.name

    def unbind(name: str) -> None:
        old = env.pop(name, None)
        if old is not None:
            old.names.discard(name)

    for node in cfg.nodes:
        if node.kind not in ("stmt", "cond"):
            continue
        stmt = node.stmt
        bound_name: str | None = None
        if isinstance(stmt, VarDecl):
            bound_name = stmt.name
        elif isinstance(stmt, Assign):
            bound_name = stmt.name

        for occ in node_calls(node):
            if occ.is_new:
                if occ.is_binding and bound_name is not None:
                    unbind(bound_name)
                    obj = TrackedObject(
                        class_name=occ.name,
                        method_name=method_name,
                        object_var=bound_name,
                        alloc_node=node.id,
                        alloc_seq=occ.seq,
                        alloc_span=stmt.span,
                        alloc_args=occ.args,
                        names={bound_name},
                    )
                    objects.append(obj)
                    env[bound_name] = obj
            else:
                target = env.get(occ.receiver or "")
                if target is not None:
                    target.call_sites.append(
                        CallSite(node.id, occ.seq, occ.name, occ.args, occ.span)
                    )

        # direct variable-to-variable copy extends the alias set
        if bound_name is not None:
            rhs = stmt.init if isinstance(stmt, VarDecl) else stmt.value
            if isinstance(rhs, VarRef):
                src = env.get(rhs.name)
                if src is not None:
                    if env.get(bound_name) is not src:
                        unbind(bound_name)
                        env[bound_name] = src
                        src.names.add(bound_name)
                else:
                    unbind(bound_name)
            elif not isinstance(rhs, NewExpr) and rhs is not None:
                unbind(bound_name)

    return objects
