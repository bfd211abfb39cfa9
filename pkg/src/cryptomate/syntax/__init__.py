"""MiniJava-CF front end: lexer, parser, control-flow graphs, tracked objects."""

from .ast import (
    Assign,
    BoolLit,
    CompilationUnit,
    Expr,
    ExprStmt,
    If,
    IntLit,
    MethodCall,
    MethodDecl,
    NewExpr,
    Param,
    Return,
    Span,
    Stmt,
    StringLit,
    VarDecl,
    VarRef,
    While,
)
from .cfg import Cfg, CfgNode, Edge, build_cfg
from .lexer import CommentToken, LexError, LexResult, Token, tokenize
from .objects import CallOccurrence, CallSite, TrackedObject, extract_objects, node_calls
from .parser import ParseDiagnostic, ParseError, ParseResult, parse

__all__ = [
    "Assign",
    "BoolLit",
    "CallOccurrence",
    "CallSite",
    "Cfg",
    "CfgNode",
    "CommentToken",
    "CompilationUnit",
    "Edge",
    "Expr",
    "ExprStmt",
    "If",
    "IntLit",
    "LexError",
    "LexResult",
    "MethodCall",
    "MethodDecl",
    "NewExpr",
    "Param",
    "ParseDiagnostic",
    "ParseError",
    "ParseResult",
    "Return",
    "Span",
    "Stmt",
    "StringLit",
    "Token",
    "TrackedObject",
    "VarDecl",
    "VarRef",
    "While",
    "build_cfg",
    "extract_objects",
    "node_calls",
    "parse",
    "tokenize",
]
