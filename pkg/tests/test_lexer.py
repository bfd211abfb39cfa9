from __future__ import annotations

import pytest

from cryptomate.syntax.lexer import CommentToken, LexError, Token, tokenize

from _support import CORPUS


def test_minimal_program_tokens():
    result = tokenize("void m() {}")
    assert [t.text for t in result.tokens] == ["void", "m", "(", ")", "{", "}"]
    assert result.tokens[0].kind == "keyword"
    assert result.tokens[1].kind == "ident"
    assert result.tokens[2].kind == "punct"
    assert result.comments == ()


def test_comment_preserved_separately():
    # expected positions derived by hand: x=1, .=2, init=3..6, (=7, key=8..10,
    # )=11, ;=12, then two spaces, comment at column 14
    result = tokenize("x.init(key); // cm:allow r1")
    assert [t.text for t in result.tokens] == ["x", ".", "init", "(", "key", ")", ";"]
    assert result.tokens[0] == Token("ident", "x", 1, 1)
    assert result.tokens[2] == Token("ident", "init", 1, 3)
    assert result.tokens[4] == Token("ident", "key", 1, 8)
    assert result.comments == (CommentToken("cm:allow r1", 1, 14),)


def test_unterminated_string_is_lex_error():
    with pytest.raises(LexError) as exc:
        tokenize('String s = "DES')
    assert exc.value.line == 1
    assert exc.value.col == 12


def test_illegal_character():
    with pytest.raises(LexError) as exc:
        tokenize("void m() { int x = 1 # 2; }")
    assert exc.value.col == 22


def test_string_and_int_literals():
    result = tokenize('f.g("DES", 42);')
    kinds = [t.kind for t in result.tokens]
    assert "string-literal" in kinds and "int-literal" in kinds
    string_tok = next(t for t in result.tokens if t.kind == "string-literal")
    assert string_tok.text == '"DES"'


def test_tokens_match_source_slices():
    """Every token's (line, col, text) points at exactly that text."""
    for path in sorted(CORPUS.rglob("*.mj")):
        source = path.read_text(encoding="utf-8")
        lines = source.splitlines()
        result = tokenize(source)
        for tok in result.tokens:
            line = lines[tok.line - 1]
            assert line[tok.col - 1 : tok.col - 1 + len(tok.text)] == tok.text, (
                path,
                tok,
            )
        for comment in result.comments:
            line = lines[comment.line - 1]
            assert line[comment.col - 1 : comment.col + 1] == "//"


def test_crlf_and_tabs_tolerated():
    result = tokenize("void m()\r\n{\t}\r\n")
    assert [t.text for t in result.tokens] == ["void", "m", "(", ")", "{", "}"]
    assert result.tokens[4].line == 2
