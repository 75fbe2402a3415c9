"""Recursive-descent parser for Madeup.

Grammar, binding tightest first: parentheses; juxtaposition application
(`WORD atom+`, atoms never crossing a newline or operator); `^`
(right-associative); unary minus; `* /`; `+ -`; comparisons. Statements are
newline-separated; `WORD = expr` assigns and `WORD WORD+ = expr` defines a
function.
"""

from __future__ import annotations

from contextlib import contextmanager

from .ast_nodes import (
    Assign,
    Binary,
    Block,
    Call,
    Expr,
    ForIn,
    ForTo,
    FuncDef,
    Ident,
    If,
    Negate,
    NumberLit,
    Program,
    Repeat,
)
from .diagnostics import Diagnostic, MadeupSyntaxError, Severity, Span
from .lexer import Token, TokenKind, tokenize

_COMPARISON_OPS = ("==", "!=", "<", "<=", ">", ">=")
_ATOM_KINDS = (TokenKind.NUMBER, TokenKind.WORD, TokenKind.LPAREN)


class _ParseError(Exception):
    """Internal unwind signal; the diagnostic is already recorded."""


def parse(tokens: list[Token]) -> Program:
    """Parse a token list into a Program, raising MadeupSyntaxError on failure."""
    try:
        return _Parser(tokens).parse_program()
    except RecursionError:
        # Hostile inputs like tens of thousands of nested parentheses must
        # surface as a diagnostic, not a crashed request.
        raise MadeupSyntaxError([
            Diagnostic(
                Severity.ERROR,
                "expression nesting exceeds the supported depth",
                Span(1, 1),
            )
        ]) from None


def parse_source(source: str) -> Program:
    """Tokenize and parse source text in one step."""
    return parse(tokenize(source))


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # ── token access ─────────────────────────────────────────────

    def _peek(self, offset: int = 0) -> Token | None:
        idx = self.pos + offset
        return self.tokens[idx] if idx < len(self.tokens) else None

    def _at_eof(self) -> bool:
        return self.pos >= len(self.tokens)

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _at(self, kind: TokenKind, lexeme: str | None = None) -> bool:
        tok = self._peek()
        if tok is None or tok.kind != kind:
            return False
        return lexeme is None or tok.lexeme == lexeme

    def _here(self) -> Span:
        tok = self._peek()
        if tok is not None:
            return tok.span
        if self.tokens:
            last = self.tokens[-1]
            return Span(last.span.line, last.span.column + len(last.lexeme))
        return Span(1, 1)

    def _error(self, message: str, span: Span | None = None) -> _ParseError:
        self.diagnostics.append(
            Diagnostic(Severity.ERROR, message, span or self._here())
        )
        return _ParseError()

    def _describe(self, tok: Token | None) -> str:
        return "end of input" if tok is None else repr(tok.lexeme)

    # ── statements ───────────────────────────────────────────────

    def parse_program(self) -> Program:
        statements = self._statement_list(terminators=())
        if not self._at_eof():
            # A stray `end` or `else` at top level lands here.
            self._error(f"unexpected {self._describe(self._peek())}")
        if self.diagnostics:
            raise MadeupSyntaxError(self.diagnostics)
        return Block(tuple(statements), span=Span(1, 1))

    def _statement_list(self, terminators: tuple[str, ...]) -> list[Expr]:
        statements: list[Expr] = []
        while True:
            self._skip_newlines()
            tok = self._peek()
            if tok is None:
                return statements
            if tok.kind == TokenKind.KEYWORD and tok.lexeme in terminators:
                return statements
            if tok.kind == TokenKind.KEYWORD and tok.lexeme in ("end", "else") and not terminators:
                return statements
            try:
                statements.append(self._parse_statement())
                self._expect_statement_separator()
            except _ParseError:
                self._synchronize()

    def _skip_newlines(self) -> None:
        while self._at(TokenKind.NEWLINE):
            self._advance()

    def _expect_statement_separator(self) -> None:
        tok = self._peek()
        if tok is None or tok.kind == TokenKind.NEWLINE:
            return
        if tok.kind == TokenKind.KEYWORD and tok.lexeme in ("end", "else"):
            return
        raise self._error(f"expected newline, found {self._describe(tok)}")

    def _synchronize(self) -> None:
        while not self._at_eof() and not self._at(TokenKind.NEWLINE):
            self._advance()

    def _parse_statement(self) -> Expr:
        tok = self._peek()
        assert tok is not None
        if tok.kind == TokenKind.KEYWORD:
            if tok.lexeme == "repeat":
                return self._parse_repeat()
            if tok.lexeme == "for":
                return self._parse_for()
            if tok.lexeme == "if":
                return self._parse_if()
            raise self._error(f"unexpected keyword {tok.lexeme!r}")
        if tok.kind == TokenKind.WORD:
            # WORD+ '=' introduces an assignment or function definition.
            j = 0
            while self._at_word_offset(j):
                j += 1
            eq = self._peek(j)
            if j >= 1 and eq is not None and eq.kind == TokenKind.OPERATOR and eq.lexeme == "=":
                return self._parse_assign_or_funcdef(j)
        return self._parse_expression()

    def _at_word_offset(self, offset: int) -> bool:
        tok = self._peek(offset)
        return tok is not None and tok.kind == TokenKind.WORD

    def _parse_assign_or_funcdef(self, word_count: int) -> Expr:
        first = self._advance()
        if word_count == 1:
            self._advance()  # '='
            rhs = self._parse_expression()
            return Assign(first.lexeme, rhs, span=first.span)
        params: list[str] = []
        for _ in range(word_count - 1):
            params.append(self._advance().lexeme)
        if len(set(params)) != len(params):
            raise self._error(
                f"duplicate parameter in definition of {first.lexeme!r}", first.span
            )
        self._advance()  # '='
        body = self._parse_expression()
        return FuncDef(first.lexeme, tuple(params), body, span=first.span)

    # ── block constructs ─────────────────────────────────────────

    def _parse_repeat(self) -> Expr:
        kw = self._advance()
        with self._unterminated_guard(kw):
            count = self._parse_expression()
            body = self._parse_body(kw, ("end",))
            self._expect_keyword("end")
        return Repeat(count, body, span=kw.span)

    def _parse_for(self) -> Expr:
        kw = self._advance()
        with self._unterminated_guard(kw):
            var_tok = self._peek()
            if var_tok is None or var_tok.kind != TokenKind.WORD:
                raise self._error(
                    f"expected loop variable, found {self._describe(var_tok)}"
                )
            self._advance()
            if self._at(TokenKind.KEYWORD, "to"):
                self._advance()
                limit = self._parse_expression()
                body = self._parse_body(kw, ("end",))
                self._expect_keyword("end")
                return ForTo(var_tok.lexeme, limit, body, span=kw.span)
            if self._at(TokenKind.KEYWORD, "in"):
                self._advance()
                lo = self._parse_expression()
                if not self._at(TokenKind.RANGE):
                    raise self._error(
                        f"expected '..', found {self._describe(self._peek())}"
                    )
                self._advance()
                hi = self._parse_expression()
                body = self._parse_body(kw, ("end",))
                self._expect_keyword("end")
                return ForIn(var_tok.lexeme, lo, hi, body, span=kw.span)
            raise self._error(
                f"expected 'to' or 'in', found {self._describe(self._peek())}"
            )

    def _parse_if(self) -> Expr:
        kw = self._advance()
        with self._unterminated_guard(kw):
            cond = self._parse_expression()
            then_block = self._parse_body(kw, ("end", "else"))
            else_block: Block | None = None
            if self._at(TokenKind.KEYWORD, "else"):
                self._advance()
                else_block = self._parse_body(kw, ("end",))
            self._expect_keyword("end")
        return If(cond, then_block, else_block, span=kw.span)

    def _parse_body(self, opener: Token, terminators: tuple[str, ...]) -> Block:
        span = self._here()
        statements = self._statement_list(terminators)
        if self._at_eof():
            raise self._error(
                f"unterminated block ('{opener.lexeme}' without 'end')", opener.span
            )
        if not statements:
            raise self._error(f"empty '{opener.lexeme}' body", opener.span)
        return Block(tuple(statements), span=span)

    def _expect_keyword(self, lexeme: str) -> None:
        if not self._at(TokenKind.KEYWORD, lexeme):
            raise self._error(f"expected '{lexeme}', found {self._describe(self._peek())}")
        self._advance()

    @contextmanager
    def _unterminated_guard(self, opener: Token):
        """Rewrite an end-of-input failure as an unterminated-block diagnostic."""
        try:
            yield
        except _ParseError:
            if self._at_eof() and self.diagnostics:
                last = self.diagnostics[-1]
                if "unterminated block" not in last.message:
                    self.diagnostics[-1] = Diagnostic(
                        Severity.ERROR,
                        f"unterminated block ('{opener.lexeme}' without 'end')",
                        opener.span,
                    )
            raise

    # ── expressions ──────────────────────────────────────────────

    def _parse_expression(self) -> Expr:
        left = self._parse_additive()
        while self._at_operator(_COMPARISON_OPS):
            op = self._advance()
            right = self._parse_additive()
            left = Binary(op.lexeme, left, right, span=left.span)
        return left

    def _parse_additive(self) -> Expr:
        left = self._parse_multiplicative()
        while self._at_operator(("+", "-")):
            op = self._advance()
            right = self._parse_multiplicative()
            left = Binary(op.lexeme, left, right, span=left.span)
        return left

    def _parse_multiplicative(self) -> Expr:
        left = self._parse_unary()
        while self._at_operator(("*", "/")):
            op = self._advance()
            right = self._parse_unary()
            left = Binary(op.lexeme, left, right, span=left.span)
        return left

    def _parse_unary(self) -> Expr:
        if self._at_operator(("-",)):
            op = self._advance()
            return Negate(self._parse_unary(), span=op.span)
        return self._parse_power()

    def _parse_power(self) -> Expr:
        base = self._parse_application()
        if self._at_operator(("^",)):
            self._advance()
            return Binary("^", base, self._parse_power_rhs(), span=base.span)
        return base

    def _parse_power_rhs(self) -> Expr:
        # `^` is right-associative and admits a unary minus in its exponent.
        if self._at_operator(("-",)):
            op = self._advance()
            return Negate(self._parse_power_rhs(), span=op.span)
        return self._parse_power()

    def _at_operator(self, lexemes: tuple[str, ...]) -> bool:
        tok = self._peek()
        return (
            tok is not None
            and tok.kind == TokenKind.OPERATOR
            and tok.lexeme in lexemes
        )

    def _parse_application(self) -> Expr:
        tok = self._peek()
        if tok is None:
            raise self._error("expected expression, found end of input")
        if tok.kind == TokenKind.WORD:
            self._advance()
            args: list[Expr] = []
            while True:
                nxt = self._peek()
                if nxt is None or nxt.kind not in _ATOM_KINDS:
                    break
                args.append(self._parse_atom())
            if args:
                return Call(tok.lexeme, tuple(args), span=tok.span)
            return Ident(tok.lexeme, span=tok.span)
        return self._parse_atom()

    def _parse_atom(self) -> Expr:
        tok = self._peek()
        if tok is None:
            raise self._error("expected expression, found end of input")
        if tok.kind == TokenKind.NUMBER:
            self._advance()
            return NumberLit(float(tok.lexeme), span=tok.span)
        if tok.kind == TokenKind.WORD:
            self._advance()
            return Ident(tok.lexeme, span=tok.span)
        if tok.kind == TokenKind.LPAREN:
            self._advance()
            inner = self._parse_expression()
            if not self._at(TokenKind.RPAREN):
                raise self._error(f"expected ')', found {self._describe(self._peek())}")
            self._advance()
            return inner
        raise self._error(f"expected expression, found {self._describe(tok)}", tok.span)
