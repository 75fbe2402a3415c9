"""Tokenizer for Madeup source text.

Madeup is line-structured: newlines separate statements and become NEWLINE
tokens. Identifiers and keywords are alphabetic words; calls are written by
juxtaposition, so the lexer never needs commas or semicolons.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .diagnostics import Diagnostic, MadeupSyntaxError, Severity, Span

KEYWORDS = frozenset({"repeat", "for", "to", "in", "end", "if", "else"})

# Two-character operators must be tried before their one-character prefixes.
_OPERATORS = ("==", "!=", "<=", ">=", "+", "-", "*", "/", "^", "<", ">", "=")


class TokenKind(enum.Enum):
    WORD = enum.auto()
    NUMBER = enum.auto()
    OPERATOR = enum.auto()
    RANGE = enum.auto()
    LPAREN = enum.auto()
    RPAREN = enum.auto()
    NEWLINE = enum.auto()
    KEYWORD = enum.auto()


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.lexeme!r}, {self.span})"


def tokenize(source: str) -> list[Token]:
    """Tokenize source text, raising MadeupSyntaxError on unknown characters.

    CRLF (and stray CR) line endings are normalized to LF first, so spans are
    stable across platforms.
    """
    source = source.replace("\r\n", "\n").replace("\r", "\n")
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []

    i = 0
    line = 1
    column = 1
    n = len(source)

    def emit(kind: TokenKind, lexeme: str, span: Span) -> None:
        tokens.append(Token(kind, lexeme, span))

    while i < n:
        ch = source[i]
        span = Span(line, column)

        if ch == "\n":
            emit(TokenKind.NEWLINE, "\n", span)
            i += 1
            line += 1
            column = 1
            continue

        if ch in " \t":
            i += 1
            column += 1
            continue

        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.WORD
            emit(kind, word, span)
            column += j - i
            i = j
            continue

        if ch.isdigit() or (ch == "-" and _starts_negative_literal(source, i, tokens)):
            j = i + 1 if ch == "-" else i
            while j < n and source[j].isdigit():
                j += 1
            # A single dot continues the literal only when digits follow it;
            # `..` after a number belongs to a RANGE.
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            lexeme = source[i:j]
            if not math.isfinite(float(lexeme)):
                diagnostics.append(
                    Diagnostic(Severity.ERROR, f"number literal out of range: {lexeme}", span)
                )
            else:
                emit(TokenKind.NUMBER, lexeme, span)
            column += j - i
            i = j
            continue

        if ch == ".":
            if i + 1 < n and source[i + 1] == ".":
                emit(TokenKind.RANGE, "..", span)
                i += 2
                column += 2
                continue
            diagnostics.append(Diagnostic(Severity.ERROR, "unexpected character '.'", span))
            i += 1
            column += 1
            continue

        if ch == "(":
            emit(TokenKind.LPAREN, "(", span)
            i += 1
            column += 1
            continue

        if ch == ")":
            emit(TokenKind.RPAREN, ")", span)
            i += 1
            column += 1
            continue

        for op in _OPERATORS:
            if source.startswith(op, i):
                emit(TokenKind.OPERATOR, op, span)
                i += len(op)
                column += len(op)
                break
        else:
            diagnostics.append(
                Diagnostic(Severity.ERROR, f"unknown character {ch!r}", span)
            )
            i += 1
            column += 1

    if diagnostics:
        raise MadeupSyntaxError(diagnostics)
    return tokens


def _starts_negative_literal(source: str, i: int, tokens: list[Token]) -> bool:
    """Decide whether a '-' begins a negative number literal.

    It does when a digit follows immediately, the '-' is preceded by
    whitespace, start of input, or '(', and the previous token cannot be a
    left operand (NUMBER or RPAREN). This makes `move -5` a call with a
    negative argument while `x - 5` and `2 -5` stay subtractions.
    """
    if i + 1 >= len(source) or not source[i + 1].isdigit():
        return False
    if i > 0 and source[i - 1] not in " \t\n(":
        return False
    if tokens and tokens[-1].kind in (TokenKind.NUMBER, TokenKind.RPAREN):
        return False
    return True
