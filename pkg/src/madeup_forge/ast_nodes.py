"""Abstract syntax tree for the Madeup language.

Nodes are frozen dataclasses with tuple children. Spans are excluded from
equality so structural comparisons (round-trip tests, golden ASTs) ignore
layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Span

_NO_SPAN = Span(0, 0)


@dataclass(frozen=True)
class Expr:
    span: Span = field(compare=False, repr=False, kw_only=True, default=_NO_SPAN)


@dataclass(frozen=True)
class NumberLit(Expr):
    value: float


@dataclass(frozen=True)
class Ident(Expr):
    name: str


@dataclass(frozen=True)
class Negate(Expr):
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    callee: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Assign(Expr):
    name: str
    rhs: Expr


@dataclass(frozen=True)
class FuncDef(Expr):
    name: str
    params: tuple[str, ...]
    body: Expr


@dataclass(frozen=True)
class Block(Expr):
    statements: tuple[Expr, ...]


@dataclass(frozen=True)
class Repeat(Expr):
    count: Expr
    body: Block


@dataclass(frozen=True)
class ForTo(Expr):
    var: str
    limit: Expr
    body: Block


@dataclass(frozen=True)
class ForIn(Expr):
    var: str
    lo: Expr
    hi: Expr
    body: Block


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then_block: Block
    else_block: Block | None


Program = Block


def format_number(value: float) -> str:
    """Render a number the way a user would write it: `4`, not `4.0`."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


# ── S-expression rendering (stable debug/golden surface) ────────────


def to_sexpr(node: Expr) -> str:
    if isinstance(node, NumberLit):
        return format_number(node.value)
    if isinstance(node, Ident):
        return node.name
    if isinstance(node, Negate):
        return f"(neg {to_sexpr(node.operand)})"
    if isinstance(node, Binary):
        return f"({node.op} {to_sexpr(node.left)} {to_sexpr(node.right)})"
    if isinstance(node, Call):
        parts = " ".join(to_sexpr(a) for a in node.args)
        return f"(call {node.callee} {parts})" if parts else f"(call {node.callee})"
    if isinstance(node, Assign):
        return f"(assign {node.name} {to_sexpr(node.rhs)})"
    if isinstance(node, FuncDef):
        params = " ".join(node.params)
        return f"(func {node.name} ({params}) {to_sexpr(node.body)})"
    if isinstance(node, Block):
        parts = " ".join(to_sexpr(s) for s in node.statements)
        return f"(block {parts})" if parts else "(block)"
    if isinstance(node, Repeat):
        return f"(repeat {to_sexpr(node.count)} {to_sexpr(node.body)})"
    if isinstance(node, ForTo):
        return f"(for-to {node.var} {to_sexpr(node.limit)} {to_sexpr(node.body)})"
    if isinstance(node, ForIn):
        return (
            f"(for-in {node.var} {to_sexpr(node.lo)} {to_sexpr(node.hi)}"
            f" {to_sexpr(node.body)})"
        )
    if isinstance(node, If):
        if node.else_block is None:
            return f"(if {to_sexpr(node.cond)} {to_sexpr(node.then_block)})"
        return (
            f"(if {to_sexpr(node.cond)} {to_sexpr(node.then_block)}"
            f" {to_sexpr(node.else_block)})"
        )
    raise TypeError(f"unknown AST node: {node!r}")


def program_to_sexpr(program: Program) -> str:
    """Render a program; a single-statement program prints without its block."""
    if len(program.statements) == 1:
        return to_sexpr(program.statements[0])
    return to_sexpr(program)


# ── Source rendering (round-trip surface) ────────────────────────────
#
# Compound subexpressions are always parenthesized, which keeps the output
# unambiguous without precedence bookkeeping. Negative literals are
# parenthesized wherever a bare `-` could re-lex as a subtraction.


def to_source(program: Program) -> str:
    lines: list[str] = []
    for stmt in program.statements:
        _stmt_lines(stmt, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def _stmt_lines(node: Expr, depth: int, out: list[str]) -> None:
    pad = "  " * depth
    if isinstance(node, Assign):
        out.append(f"{pad}{node.name} = {_expr_src(node.rhs)}")
    elif isinstance(node, FuncDef):
        params = " ".join(node.params)
        out.append(f"{pad}{node.name} {params} = {_expr_src(node.body)}")
    elif isinstance(node, Repeat):
        out.append(f"{pad}repeat {_expr_src(node.count)}")
        _body_lines(node.body, depth + 1, out)
        out.append(f"{pad}end")
    elif isinstance(node, ForTo):
        out.append(f"{pad}for {node.var} to {_expr_src(node.limit)}")
        _body_lines(node.body, depth + 1, out)
        out.append(f"{pad}end")
    elif isinstance(node, ForIn):
        out.append(f"{pad}for {node.var} in {_atom_src(node.lo)}..{_atom_src(node.hi)}")
        _body_lines(node.body, depth + 1, out)
        out.append(f"{pad}end")
    elif isinstance(node, If):
        out.append(f"{pad}if {_expr_src(node.cond)}")
        _body_lines(node.then_block, depth + 1, out)
        if node.else_block is not None:
            out.append(f"{pad}else")
            _body_lines(node.else_block, depth + 1, out)
        out.append(f"{pad}end")
    else:
        out.append(f"{pad}{_expr_src(node)}")


def _body_lines(block: Block, depth: int, out: list[str]) -> None:
    for stmt in block.statements:
        _stmt_lines(stmt, depth, out)


def _expr_src(node: Expr) -> str:
    if isinstance(node, NumberLit):
        return format_number(node.value)
    if isinstance(node, Ident):
        return node.name
    if isinstance(node, Negate):
        return f"-({_expr_src(node.operand)})"
    if isinstance(node, Binary):
        return f"{_operand_src(node.left)} {node.op} {_operand_src(node.right)}"
    if isinstance(node, Call):
        args = " ".join(_atom_src(a) for a in node.args)
        return f"{node.callee} {args}" if args else node.callee
    raise TypeError(f"not an inline expression: {node!r}")


def _operand_src(node: Expr) -> str:
    # Bare negative literals are safe after an operator token.
    if isinstance(node, (NumberLit, Ident)):
        return _expr_src(node)
    return f"({_expr_src(node)})"


def _atom_src(node: Expr) -> str:
    # Call arguments and range bounds: only nonnegative literals and
    # identifiers may appear bare.
    if isinstance(node, NumberLit) and node.value >= 0:
        return format_number(node.value)
    if isinstance(node, Ident):
        return node.name
    return f"({_expr_src(node)})"
