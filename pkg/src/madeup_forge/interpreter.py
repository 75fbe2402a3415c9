"""Tree-walking evaluator for Madeup programs.

Everything is an expression: blocks yield their last statement, loops the
value of their final iteration, conditionals the executed branch, and
assignments the assigned value. Values are dynamically typed: numbers
(double precision), booleans, closures, and `nothing`.

Closures capture their defining environment by value snapshot, so no later
assignment can change what a defined function computes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

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
    Repeat,
)
from .diagnostics import Diagnostic, MadeupRuntimeError, Severity, Span
from .turtle import Turtle, TurtleError, VertexLimitExceeded


class _NothingType:
    """The unit value produced by navigation commands and empty loops."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "nothing"


NOTHING = _NothingType()

Value = object  # float | bool | Closure | _NothingType


class Environment:
    """Chain of scopes; lookup is innermost-first, assignment is local."""

    __slots__ = ("bindings", "parent")

    def __init__(self, parent: "Environment | None" = None):
        self.bindings: dict[str, Value] = {}
        self.parent = parent

    def lookup(self, name: str) -> Value | None:
        env: Environment | None = self
        while env is not None:
            value = env.bindings.get(name, _MISSING)
            if value is not _MISSING:
                return value
            env = env.parent
        return None

    def assign(self, name: str, value: Value) -> None:
        self.bindings[name] = value

    def snapshot(self) -> "Environment":
        """Flatten the chain into a single, detached scope."""
        flat = Environment()
        chain: list[Environment] = []
        env: Environment | None = self
        while env is not None:
            chain.append(env)
            env = env.parent
        for scope in reversed(chain):
            flat.bindings.update(scope.bindings)
        return flat


_MISSING = object()


@dataclass(frozen=True)
class Closure:
    name: str
    params: tuple[str, ...]
    body: Expr
    captured: Environment = field(repr=False)


@dataclass(frozen=True)
class EvalLimits:
    max_steps: int = 10_000_000
    max_vertices: int = 5_000_000

    def __post_init__(self) -> None:
        if self.max_steps <= 0 or self.max_vertices <= 0:
            raise ValueError("evaluation limits must be strictly positive")


MATH_BUILTINS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "abs": abs,
    "floor": math.floor,
    "ceil": math.ceil,
}

NAV_ARITY = {"move": 1, "moveto": 3, "yaw": 1, "pitch": 1, "roll": 1, "tri": 3}


def apply_builtin(name: str, args: list[Value]) -> Value:
    """Apply a math builtin or the `pi` constant to already-evaluated args."""
    if name == "pi":
        if args:
            raise ValueError("pi takes no arguments")
        return math.pi
    fn = MATH_BUILTINS.get(name)
    if fn is None:
        raise ValueError(f"unknown builtin {name!r}")
    if len(args) != 1:
        raise ValueError(f"{name} expects 1 argument, got {len(args)}")
    arg = args[0]
    if isinstance(arg, bool) or not isinstance(arg, float):
        raise ValueError(f"{name} expects a number")
    result = float(fn(arg))
    if not math.isfinite(result):
        raise ValueError(f"{name} produced a non-finite result")
    return result


class Interpreter:
    """One evaluation: owns its step counter, warnings, and turtle sink."""

    def __init__(self, sink: Turtle | None = None,
                 limits: EvalLimits | None = None,
                 deadline: float | None = None):
        self.sink = sink if sink is not None else Turtle()
        self.limits = limits if limits is not None else EvalLimits()
        self.deadline = deadline
        self.warnings: list[Diagnostic] = []
        self.steps = 0
        self._dispatch = {
            NumberLit: self._eval_number,
            Ident: self._eval_ident,
            Call: self._eval_call,
            Binary: self._eval_binary,
            Block: self._eval_block,
            Assign: self._eval_assign,
            Negate: self._eval_negate,
            Repeat: self._eval_repeat,
            ForTo: self._eval_for_to,
            ForIn: self._eval_for_in,
            If: self._eval_if,
            FuncDef: self._eval_funcdef,
        }

    def run(self, program: Block, env: Environment | None = None) -> Value:
        if env is None:
            env = Environment()
        result: Value = NOTHING
        try:
            for stmt in program.statements:
                result = self._eval(stmt, env)
        except RecursionError:
            # Left-deep operator chains parse iteratively but evaluate
            # recursively; report them instead of crashing.
            raise MadeupRuntimeError(
                "expression nesting too deep to evaluate", program.span
            ) from None
        return result

    # ── core dispatch ────────────────────────────────────────────

    def _eval(self, node: Expr, env: Environment) -> Value:
        self.steps += 1
        if self.steps > self.limits.max_steps:
            raise MadeupRuntimeError(
                f"limit exceeded: step budget of {self.limits.max_steps}", node.span
            )
        if self.deadline is not None and (self.steps & 2047) == 0:
            if time.monotonic() > self.deadline:
                raise MadeupRuntimeError("limit exceeded: time budget", node.span)
        return self._dispatch[type(node)](node, env)

    def _eval_number(self, node: NumberLit, env: Environment) -> Value:
        return node.value

    def _eval_ident(self, node: Ident, env: Environment) -> Value:
        value = env.lookup(node.name)
        if value is not None:
            return value
        if node.name == "pi":
            return math.pi
        if node.name in MATH_BUILTINS or node.name in NAV_ARITY:
            raise MadeupRuntimeError(
                f"builtin {node.name!r} requires arguments", node.span
            )
        raise MadeupRuntimeError(f"undefined name {node.name!r}", node.span)

    def _eval_assign(self, node: Assign, env: Environment) -> Value:
        value = self._eval(node.rhs, env)
        env.assign(node.name, value)
        return value

    def _eval_funcdef(self, node: FuncDef, env: Environment) -> Value:
        captured = env.snapshot()
        closure = Closure(node.name, node.params, node.body, captured)
        # The snapshot closes over the function itself so recursion works;
        # nothing else may touch it after this point.
        captured.bindings[node.name] = closure
        env.assign(node.name, closure)
        return closure

    def _eval_block(self, node: Block, env: Environment) -> Value:
        result: Value = NOTHING
        for stmt in node.statements:
            result = self._eval(stmt, env)
        return result

    def _eval_negate(self, node: Negate, env: Environment) -> Value:
        value = self._eval(node.operand, env)
        if isinstance(value, bool) or not isinstance(value, float):
            raise MadeupRuntimeError("cannot negate a non-number", node.span)
        return -value

    def _eval_binary(self, node: Binary, env: Environment) -> Value:
        left = self._eval(node.left, env)
        right = self._eval(node.right, env)
        op = node.op
        if op == "==" or op == "!=":
            if type(left) is not type(right):
                raise MadeupRuntimeError(
                    "cannot compare values of different types", node.span
                )
            return (left == right) if op == "==" else (left != right)
        if isinstance(left, bool) or not isinstance(left, float) \
                or isinstance(right, bool) or not isinstance(right, float):
            raise MadeupRuntimeError(
                f"operator {op!r} expects numbers", node.span
            )
        if op == "+":
            result = left + right
        elif op == "-":
            result = left - right
        elif op == "*":
            result = left * right
        elif op == "/":
            if right == 0.0:
                raise MadeupRuntimeError(
                    "non-finite arithmetic result (division by zero)", node.span
                )
            result = left / right
        elif op == "^":
            try:
                result = math.pow(left, right)
            except (ValueError, OverflowError):
                raise MadeupRuntimeError(
                    "non-finite arithmetic result (invalid power)", node.span
                ) from None
        elif op == "<":
            return left < right
        elif op == "<=":
            return left <= right
        elif op == ">":
            return left > right
        elif op == ">=":
            return left >= right
        else:  # pragma: no cover - parser only emits the ops above
            raise MadeupRuntimeError(f"unknown operator {op!r}", node.span)
        if not math.isfinite(result):
            raise MadeupRuntimeError("non-finite arithmetic result", node.span)
        return result

    # ── calls ────────────────────────────────────────────────────

    def _eval_call(self, node: Call, env: Environment) -> Value:
        callee = env.lookup(node.callee)
        if callee is not None:
            if not isinstance(callee, Closure):
                raise MadeupRuntimeError(
                    f"{node.callee!r} is not a function", node.span
                )
            return self._apply_closure(callee, node, env)
        args = [self._eval(arg, env) for arg in node.args]
        name = node.callee
        if name in NAV_ARITY:
            return self._apply_nav(name, args, node.span)
        if name in MATH_BUILTINS or name == "pi":
            try:
                return apply_builtin(name, args)
            except ValueError as exc:
                raise MadeupRuntimeError(str(exc), node.span) from None
        raise MadeupRuntimeError(f"undefined name {name!r}", node.span)

    def _apply_closure(self, closure: Closure, node: Call, env: Environment) -> Value:
        if len(node.args) != len(closure.params):
            raise MadeupRuntimeError(
                f"{closure.name!r} expects {len(closure.params)} argument(s), "
                f"got {len(node.args)}",
                node.span,
            )
        call_env = Environment(parent=closure.captured)
        for param, arg in zip(closure.params, node.args):
            call_env.bindings[param] = self._eval(arg, env)
        try:
            return self._eval(closure.body, call_env)
        except RecursionError:
            raise MadeupRuntimeError(
                f"recursion too deep calling {closure.name!r}", node.span
            ) from None

    def _apply_nav(self, name: str, args: list[Value], span: Span) -> Value:
        if len(args) != NAV_ARITY[name]:
            raise MadeupRuntimeError(
                f"{name} expects {NAV_ARITY[name]} argument(s), got {len(args)}", span
            )
        for arg in args:
            if isinstance(arg, bool) or not isinstance(arg, float):
                raise MadeupRuntimeError(f"{name} expects numbers", span)
        sink = self.sink
        try:
            if name == "move":
                sink.move(args[0])
            elif name == "moveto":
                sink.moveto(args[0], args[1], args[2])
            elif name == "yaw":
                sink.yaw(args[0])
            elif name == "pitch":
                sink.pitch(args[0])
            elif name == "roll":
                sink.roll(args[0])
            else:  # tri
                indices = []
                for arg in args:
                    if arg != math.floor(arg):
                        raise MadeupRuntimeError(
                            f"tri indices must be whole numbers, got {arg}", span
                        )
                    indices.append(int(arg))
                sink.emit_face(indices[0], indices[1], indices[2])
        except VertexLimitExceeded as exc:
            raise MadeupRuntimeError(f"limit exceeded: {exc}", span) from None
        except TurtleError as exc:
            raise MadeupRuntimeError(str(exc), span) from None
        return NOTHING

    # ── loops and conditionals ───────────────────────────────────

    def _loop_count(self, node: Repeat, env: Environment) -> int:
        count = self._eval(node.count, env)
        if isinstance(count, bool) or not isinstance(count, float):
            raise MadeupRuntimeError("repeat count must be a number", node.span)
        truncated = math.trunc(count)
        if truncated != count:
            self.warnings.append(
                Diagnostic(
                    Severity.WARNING,
                    f"repeat count {count} truncated to {truncated}",
                    node.span,
                )
            )
        return max(0, truncated)

    def _eval_repeat(self, node: Repeat, env: Environment) -> Value:
        result: Value = NOTHING
        for _ in range(self._loop_count(node, env)):
            result = self._eval(node.body, env)
        return result

    def _eval_for_to(self, node: ForTo, env: Environment) -> Value:
        limit = self._eval(node.limit, env)
        if isinstance(limit, bool) or not isinstance(limit, float):
            raise MadeupRuntimeError("loop bound must be a number", node.span)
        result: Value = NOTHING
        i = 0.0
        while i <= limit:
            env.assign(node.var, i)
            result = self._eval(node.body, env)
            i += 1.0
        return result

    def _eval_for_in(self, node: ForIn, env: Environment) -> Value:
        lo = self._eval(node.lo, env)
        hi = self._eval(node.hi, env)
        for bound in (lo, hi):
            if isinstance(bound, bool) or not isinstance(bound, float):
                raise MadeupRuntimeError("loop bound must be a number", node.span)
        result: Value = NOTHING
        v = lo
        while v <= hi:
            env.assign(node.var, v)
            result = self._eval(node.body, env)
            v += 1.0
        return result

    def _eval_if(self, node: If, env: Environment) -> Value:
        cond = self._eval(node.cond, env)
        if not isinstance(cond, bool):
            raise MadeupRuntimeError("if condition must be a boolean", node.span)
        if cond:
            return self._eval(node.then_block, env)
        if node.else_block is not None:
            return self._eval(node.else_block, env)
        return NOTHING


def evaluate(program: Block, env: Environment | None = None,
             sink: Turtle | None = None, limits: EvalLimits | None = None,
             deadline: float | None = None) -> Value:
    """Evaluate a parsed program, returning its value.

    Convenience wrapper over Interpreter for callers that do not need the
    warning list or step count.
    """
    return Interpreter(sink, limits, deadline).run(program, env)
