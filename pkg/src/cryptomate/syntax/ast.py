"""AST node types for MiniJava-CF.

Statement kinds are exactly VarDecl, Assign, ExprStmt, If, While, Return;
expression kinds are exactly New, MethodCall, VarRef, IntLit, StringLit,
BoolLit. All nodes carry a source span with 1-based lines and columns; span
ends are exclusive on the column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Span:
    start_line: int
    start_col: int
    end_line: int
    end_col: int  # exclusive


@dataclass(frozen=True)
class NewExpr:
    class_name: str
    args: tuple["Expr", ...]
    span: Span


@dataclass(frozen=True)
class MethodCall:
    receiver: str
    method: str
    args: tuple["Expr", ...]
    span: Span


@dataclass(frozen=True)
class VarRef:
    name: str
    span: Span


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span


@dataclass(frozen=True)
class StringLit:
    value: str
    span: Span


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Span


Expr = Union[NewExpr, MethodCall, VarRef, IntLit, StringLit, BoolLit]


@dataclass(frozen=True)
class VarDecl:
    type_name: str
    name: str
    init: Expr | None
    span: Span


@dataclass(frozen=True)
class Assign:
    name: str
    value: Expr
    span: Span


@dataclass(frozen=True)
class ExprStmt:
    call: MethodCall
    span: Span


@dataclass(frozen=True)
class If:
    cond: Expr
    then_body: tuple["Stmt", ...]
    else_body: tuple["Stmt", ...] | None
    span: Span


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]
    span: Span


@dataclass(frozen=True)
class Return:
    value: Expr | None
    span: Span


Stmt = Union[VarDecl, Assign, ExprStmt, If, While, Return]


@dataclass(frozen=True)
class Param:
    type_name: str
    name: str


@dataclass(frozen=True)
class MethodDecl:
    name: str
    params: tuple[Param, ...]
    body: tuple[Stmt, ...]
    span: Span  # header through the closing brace


@dataclass(frozen=True)
class CompilationUnit:
    path: str
    methods: tuple[MethodDecl, ...]
