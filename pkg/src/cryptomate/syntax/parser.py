"""Recursive-descent parser for MiniJava-CF.

Grammar (EBNF):

    unit      := method* ;
    method    := "void" IDENT "(" [param ("," param)*] ")" block ;
    param     := type IDENT ;
    block     := "{" stmt* "}" ;
    stmt      := varDecl | assign | exprStmt | ifStmt | whileStmt | returnStmt ;
    varDecl   := type IDENT ["=" expr] ";" ;
    assign    := IDENT "=" expr ";" ;
    exprStmt  := postfix ";" ;
    ifStmt    := "if" "(" expr ")" block ["else" block] ;
    whileStmt := "while" "(" expr ")" block ;
    returnStmt:= "return" [expr] ";" ;
    expr      := "new" IDENT "(" args ")" | postfix | INT | STRING
               | "true" | "false" | IDENT ;
    postfix   := IDENT "." IDENT "(" args ")" ;
    args      := [expr ("," expr)*] ;
    type      := "int" | "boolean" | "String" | "byte[]" | IDENT ;

A syntax error inside a method is recorded as a diagnostic and parsing
resumes at the next top-level ``void`` keyword, so one broken method never
hides its siblings.
"""

from __future__ import annotations

from dataclasses import dataclass

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
from .lexer import Token


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: tuple[str, ...], found: str):
        super().__init__(
            f"{line}:{col}: expected {' or '.join(expected)}, found {found}"
        )
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    col: int
    message: str


@dataclass(frozen=True)
class ParseResult:
    unit: CompilationUnit
    diagnostics: tuple[ParseDiagnostic, ...]


def _end_of(tok: Token) -> tuple[int, int]:
    return tok.line, tok.col + len(tok.text)


class _Parser:
    def __init__(self, tokens: tuple[Token, ...]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token | None:
        idx = self.pos + offset
        return self.tokens[idx] if idx < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def error(self, expected: tuple[str, ...]) -> ParseError:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line, col = _end_of(last) if last else (1, 1)
            return ParseError(line, col, expected, "end of input")
        return ParseError(tok.line, tok.col, expected, repr(tok.text))

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error(("token",))
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            raise self.error((repr(text),))
        self.pos += 1
        return tok

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            raise self.error(("identifier",))
        self.pos += 1
        return tok

    def match(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.pos += 1
            return True
        return False

    # -- grammar ----------------------------------------------------------

    def parse_unit(self, path: str) -> ParseResult:
        methods: list[MethodDecl] = []
        diagnostics: list[ParseDiagnostic] = []
        while not self.at_end():
            try:
                methods.append(self.parse_method())
            except ParseError as exc:
                diagnostics.append(ParseDiagnostic(exc.line, exc.col, str(exc)))
                self.recover_to_next_method()
        return ParseResult(
            CompilationUnit(path, tuple(methods)), tuple(diagnostics)
        )

    def recover_to_next_method(self) -> None:
        # Depth starts at 0 wherever the error happened; unmatched closing
        # braces drive it negative, so a top-level `void` shows up at <= 0.
        depth = 0
        while not self.at_end():
            tok = self.take()
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
            elif tok.text == "void" and depth <= 0:
                self.pos -= 1
                return

    def parse_method(self) -> MethodDecl:
        start = self.expect("void")
        name = self.expect_ident()
        self.expect("(")
        params: list[Param] = []
        if not (self.peek() and self.peek().text == ")"):
            params.append(self.parse_param())
            while self.match(","):
                params.append(self.parse_param())
        self.expect(")")
        body, close = self.parse_block()
        span = Span(start.line, start.col, close.line, close.col + 1)
        return MethodDecl(name.text, tuple(params), body, span)

    def parse_param(self) -> Param:
        type_name = self.parse_type()
        name = self.expect_ident()
        return Param(type_name, name.text)

    def parse_type(self) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "ident":
            raise self.error(("type name",))
        self.pos += 1
        if self.peek() and self.peek().text == "[":
            nxt = self.peek(1)
            if nxt is not None and nxt.text == "]":
                self.pos += 2
                return tok.text + "[]"
            raise self.error(("']'",))
        return tok.text

    def parse_block(self) -> tuple[tuple[Stmt, ...], Token]:
        self.expect("{")
        stmts: list[Stmt] = []
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error(("'}'",))
            if tok.text == "}":
                close = self.take()
                return tuple(stmts), close
            stmts.append(self.parse_stmt())

    def parse_stmt(self) -> Stmt:
        tok = self.peek()
        assert tok is not None
        if tok.text == "if":
            return self.parse_if()
        if tok.text == "while":
            return self.parse_while()
        if tok.text == "return":
            return self.parse_return()
        if tok.kind == "ident":
            nxt = self.peek(1)
            if nxt is not None and (
                nxt.kind == "ident" or nxt.text == "["
            ):
                return self.parse_var_decl()
            if nxt is not None and nxt.text == "=":
                return self.parse_assign()
            if nxt is not None and nxt.text == ".":
                call = self.parse_postfix()
                semi = self.expect(";")
                span = Span(
                    call.span.start_line, call.span.start_col, *_end_of(semi)
                )
                return ExprStmt(call, span)
        raise self.error(("statement",))

    def parse_var_decl(self) -> VarDecl:
        start = self.peek()
        assert start is not None
        type_name = self.parse_type()
        name = self.expect_ident()
        init: Expr | None = None
        if self.match("="):
            init = self.parse_expr()
        semi = self.expect(";")
        span = Span(start.line, start.col, *_end_of(semi))
        return VarDecl(type_name, name.text, init, span)

    def parse_assign(self) -> Assign:
        name = self.expect_ident()
        self.expect("=")
        value = self.parse_expr()
        semi = self.expect(";")
        span = Span(name.line, name.col, *_end_of(semi))
        return Assign(name.text, value, span)

    def parse_if(self) -> If:
        start = self.expect("if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then_body, close = self.parse_block()
        else_body: tuple[Stmt, ...] | None = None
        if self.match("else"):
            else_body, close = self.parse_block()
        span = Span(start.line, start.col, close.line, close.col + 1)
        return If(cond, then_body, else_body, span)

    def parse_while(self) -> While:
        start = self.expect("while")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        body, close = self.parse_block()
        span = Span(start.line, start.col, close.line, close.col + 1)
        return While(cond, body, span)

    def parse_return(self) -> Return:
        start = self.expect("return")
        value: Expr | None = None
        if not (self.peek() and self.peek().text == ";"):
            value = self.parse_expr()
        semi = self.expect(";")
        span = Span(start.line, start.col, *_end_of(semi))
        return Return(value, span)

    def parse_expr(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise self.error(("expression",))
        if tok.text == "new":
            self.take()
            cls = self.expect_ident()
            self.expect("(")
            args, close = self.parse_args()
            span = Span(tok.line, tok.col, *_end_of(close))
            return NewExpr(cls.text, args, span)
        if tok.text in ("true", "false"):
            self.take()
            return BoolLit(tok.text == "true", _tok_span(tok))
        if tok.kind == "int-literal":
            self.take()
            return IntLit(int(tok.text), _tok_span(tok))
        if tok.kind == "string-literal":
            self.take()
            return StringLit(tok.text[1:-1], _tok_span(tok))
        if tok.kind == "ident":
            nxt = self.peek(1)
            if nxt is not None and nxt.text == ".":
                return self.parse_postfix()
            self.take()
            return VarRef(tok.text, _tok_span(tok))
        raise self.error(("expression",))

    def parse_postfix(self) -> MethodCall:
        recv = self.expect_ident()
        self.expect(".")
        method = self.expect_ident()
        self.expect("(")
        args, close = self.parse_args()
        span = Span(recv.line, recv.col, *_end_of(close))
        return MethodCall(recv.text, method.text, args, span)

    def parse_args(self) -> tuple[tuple[Expr, ...], Token]:
        args: list[Expr] = []
        if self.peek() and self.peek().text == ")":
            return tuple(args), self.take()
        args.append(self.parse_expr())
        while self.match(","):
            args.append(self.parse_expr())
        close = self.expect(")")
        return tuple(args), close


def _tok_span(tok: Token) -> Span:
    return Span(tok.line, tok.col, *_end_of(tok))


def parse(tokens: tuple[Token, ...] | list[Token], path: str = "<memory>") -> ParseResult:
    """Parse a token stream into a compilation unit plus syntax diagnostics."""
    return _Parser(tuple(tokens)).parse_unit(path)
