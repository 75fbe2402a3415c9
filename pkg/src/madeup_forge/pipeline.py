"""Source-to-mesh pipeline shared by the CLI and the HTTP service."""

from __future__ import annotations

from dataclasses import dataclass

from .ast_nodes import Program
from .diagnostics import Diagnostic
from .interpreter import EvalLimits, Interpreter, Value
from .mesh import GridParams, TriangleMesh, TubeParams, mesh_from_trace
from .parser import parse_source
from .turtle import PathTrace, TraceMode, Turtle


@dataclass
class RunResult:
    program: Program
    value: Value
    trace: PathTrace
    mesh: TriangleMesh | None
    warnings: list[Diagnostic]
    steps: int


def run_source(source: str,
               mode: TraceMode = TraceMode.POLYLINE,
               tube: TubeParams | None = None,
               grid: GridParams | None = None,
               limits: EvalLimits | None = None,
               deadline: float | None = None,
               build_mesh: bool = True) -> RunResult:
    """Parse, evaluate, and optionally solidify a program.

    Raises MadeupSyntaxError, MadeupRuntimeError, or MeshError; callers turn
    those into diagnostics for their own surface.
    """
    program = parse_source(source)
    limits = limits if limits is not None else EvalLimits()
    turtle = Turtle(mode, max_vertices=limits.max_vertices)
    interp = Interpreter(sink=turtle, limits=limits, deadline=deadline)
    value = interp.run(program)
    mesh = mesh_from_trace(turtle.trace, tube, grid) if build_mesh else None
    return RunResult(program, value, turtle.trace, mesh, interp.warnings, interp.steps)


def dump_path(trace: PathTrace) -> str:
    """One `x y z` line per vertex at 17 significant digits."""
    lines = [f"{x:.17g} {y:.17g} {z:.17g}" for x, y, z in trace.vertices]
    return "\n".join(lines) + ("\n" if lines else "")
