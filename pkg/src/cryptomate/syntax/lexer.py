"""Tokenizer for MiniJava-CF source text.

Line comments (``// ...``) are kept out of the token stream but preserved as
:class:`CommentToken` values so downstream passes can read in-code
suppression annotations.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    {"void", "if", "else", "while", "return", "new", "true", "false"}
)

_PUNCT = frozenset("(){},;=.[]")


class LexError(Exception):
    """Raised on an unterminated string literal or an illegal character."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | ident | int-literal | string-literal | punct
    text: str
    line: int  # 1-based
    col: int  # 1-based


@dataclass(frozen=True)
class CommentToken:
    text: str  # comment body, '//' and surrounding whitespace stripped
    line: int
    col: int  # column of the leading '//'


@dataclass(frozen=True)
class LexResult:
    tokens: tuple[Token, ...]
    comments: tuple[CommentToken, ...]


def tokenize(source: str) -> LexResult:
    """Split ``source`` into tokens plus a separate list of line comments."""
    tokens: list[Token] = []
    comments: list[CommentToken] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(count: int) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            start_line, start_col = line, col
            end = source.find("\n", i)
            if end == -1:
                end = n
            body = source[i + 2 : end].strip()
            comments.append(CommentToken(body, start_line, start_col))
            advance(end - i)
            continue
        if ch == '"':
            start_line, start_col = line, col
            j = i + 1
            while j < n and source[j] not in ('"', "\n"):
                j += 1
            if j >= n or source[j] == "\n":
                raise LexError(start_line, start_col, "unterminated string literal")
            text = source[i : j + 1]
            tokens.append(Token("string-literal", text, start_line, start_col))
            advance(j + 1 - i)
            continue
        if ch.isdigit():
            start_line, start_col = line, col
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int-literal", source[i:j], start_line, start_col))
            advance(j - i)
            continue
        if ch.isalpha() or ch == "_":
            start_line, start_col = line, col
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, start_line, start_col))
            advance(j - i)
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, col))
            advance(1)
            continue
        raise LexError(line, col, f"illegal character {ch!r}")

    return LexResult(tuple(tokens), tuple(comments))
