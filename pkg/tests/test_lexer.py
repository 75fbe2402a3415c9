"""Lexer tests: token goldens hand-derived from the token rules."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from madeup_forge.diagnostics import MadeupSyntaxError
from madeup_forge.lexer import Token, TokenKind, tokenize


def kinds(tokens: list[Token]) -> list[TokenKind]:
    return [t.kind for t in tokens]


def lexemes(tokens: list[Token]) -> list[str]:
    return [t.lexeme for t in tokens]


def test_move_statement():
    tokens = tokenize("move 10\n")
    assert kinds(tokens) == [TokenKind.WORD, TokenKind.NUMBER, TokenKind.NEWLINE]
    assert lexemes(tokens) == ["move", "10", "\n"]


def test_empty_input():
    assert tokenize("") == []


def test_range_splits_numbers():
    tokens = tokenize("0..100")
    assert kinds(tokens) == [TokenKind.NUMBER, TokenKind.RANGE, TokenKind.NUMBER]
    assert lexemes(tokens) == ["0", "..", "100"]


def test_keywords_and_words():
    tokens = tokenize("for i in repeat2 end")
    assert kinds(tokens) == [
        TokenKind.KEYWORD,
        TokenKind.WORD,
        TokenKind.KEYWORD,
        TokenKind.WORD,  # repeat2 is an identifier, not the keyword
        TokenKind.KEYWORD,
    ]


def test_operators_two_char_before_one_char():
    tokens = tokenize("a <= b == c != d ^ 2")
    ops = [t.lexeme for t in tokens if t.kind == TokenKind.OPERATOR]
    assert ops == ["<=", "==", "!=", "^"]


def test_spans_are_one_based_line_column():
    tokens = tokenize("move 10\nyaw 90")
    assert (tokens[0].span.line, tokens[0].span.column) == (1, 1)
    assert (tokens[1].span.line, tokens[1].span.column) == (1, 6)
    assert (tokens[3].span.line, tokens[3].span.column) == (2, 1)
    assert (tokens[4].span.line, tokens[4].span.column) == (2, 5)


def test_crlf_normalized():
    unix = tokenize("move 10\nyaw 90\n")
    dos = tokenize("move 10\r\nyaw 90\r\n")
    assert kinds(unix) == kinds(dos)
    assert lexemes(unix) == lexemes(dos)


def test_unknown_character_diagnostic_with_span():
    with pytest.raises(MadeupSyntaxError) as err:
        tokenize("move 10 @")
    (diag,) = err.value.diagnostics
    assert "@" in diag.message
    assert (diag.span.line, diag.span.column) == (1, 9)


def test_decimal_literal():
    (tok,) = tokenize("0.5")
    assert tok.kind == TokenKind.NUMBER
    assert tok.lexeme == "0.5"


def test_huge_literal_rejected():
    with pytest.raises(MadeupSyntaxError) as err:
        tokenize("9" * 400)
    assert "out of range" in err.value.diagnostics[0].message


# ── negative literal disambiguation ──────────────────────────────────


@pytest.mark.parametrize(
    "source,expected",
    [
        ("move -5", [TokenKind.WORD, TokenKind.NUMBER]),
        ("x - 5", [TokenKind.WORD, TokenKind.OPERATOR, TokenKind.NUMBER]),
        ("x-5", [TokenKind.WORD, TokenKind.OPERATOR, TokenKind.NUMBER]),
        ("2 -5", [TokenKind.NUMBER, TokenKind.OPERATOR, TokenKind.NUMBER]),
        ("(1) -5", [TokenKind.LPAREN, TokenKind.NUMBER, TokenKind.RPAREN,
                    TokenKind.OPERATOR, TokenKind.NUMBER]),
        ("-5", [TokenKind.NUMBER]),
        ("2 ^ -3", [TokenKind.NUMBER, TokenKind.OPERATOR, TokenKind.NUMBER]),
        ("(-5)", [TokenKind.LPAREN, TokenKind.NUMBER, TokenKind.RPAREN]),
        ("- 5", [TokenKind.OPERATOR, TokenKind.NUMBER]),
    ],
)
def test_minus_disambiguation(source, expected):
    assert kinds(tokenize(source)) == expected


def test_negative_literal_lexeme():
    assert lexemes(tokenize("move -5")) == ["move", "-5"]


# ── properties ────────────────────────────────────────────────────────

_source_alphabet = st.sampled_from(
    list("abcxyz move yaw 0123456789 .. ^+-*/() <=>=!\n ")
)


@given(st.lists(_source_alphabet, max_size=60).map("".join))
def test_lexeme_concatenation_reproduces_significant_source(source):
    try:
        tokens = tokenize(source)
    except MadeupSyntaxError:
        return
    stripped = "".join(source.split())
    rebuilt = "".join("".join(t.lexeme.split()) for t in tokens)
    assert rebuilt == stripped


@given(st.text(alphabet="abc 0123456789.+-*/^()\n", max_size=40))
def test_tokenize_deterministic(source):
    try:
        first = tokenize(source)
    except MadeupSyntaxError as exc:
        with pytest.raises(MadeupSyntaxError) as second:
            tokenize(source)
        assert [str(d) for d in second.value.diagnostics] == [
            str(d) for d in exc.diagnostics
        ]
        return
    assert tokenize(source) == first
