"""Command-line entry point: run programs, dump ASTs, pack and play lessons,
preview geometry as figures, and serve the HTTP API.

Exit codes: 0 success, 1 parse/runtime/geometry error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import lessons
from .ast_nodes import program_to_sexpr
from .diagnostics import (
    MadeupRuntimeError,
    MadeupSyntaxError,
    MeshError,
    Severity,
)
from .exporters import ExportFormat, ExportOptions, export_mesh
from .interpreter import EvalLimits
from .mesh import GridParams, TubeParams
from .parser import parse_source
from .pipeline import dump_path, run_source
from .turtle import TraceMode

_EXTENSION_FORMATS = {
    ".obj": ExportFormat.OBJ,
    ".stl": ExportFormat.STL_BINARY,
    ".json": ExportFormat.MESH_JSON,
}

DEFAULT_MAX_STEPS = 10_000_000


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except MadeupSyntaxError as exc:
        _print_diagnostics(args, exc.diagnostics)
        return 1
    except MadeupRuntimeError as exc:
        _print_diagnostics(args, [exc.to_diagnostic()])
        return 1
    except MeshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except lessons.CorruptMovieError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="madeup",
        description="Trace 3-D paths with a Logo-like language and solidify "
                    "them into printable meshes.",
    )
    sub = parser.add_subparsers(required=True)

    run = sub.add_parser("run", help="execute a program and export its model")
    _add_geometry_flags(run)
    run.add_argument("--format", choices=[f.value for f in ExportFormat],
                     help="output format (default: inferred from extension, else stl_binary)")
    run.add_argument("--max-steps", type=int, default=None,
                     help="evaluation step budget (default: MADEUP_MAX_STEPS or 10000000)")
    run.add_argument("--emit", choices=["path", "mesh", "ast"], default="mesh",
                     help="what to write: the vertex path, the mesh, or the AST")
    run.set_defaults(handler=_cmd_run)

    ast = sub.add_parser("ast", help="print a stable s-expression rendering of a program")
    ast.add_argument("input", type=Path)
    ast.set_defaults(handler=_cmd_ast)

    lesson = sub.add_parser("lesson", help="pack or play lesson text movies")
    lesson_sub = lesson.add_subparsers(required=True)
    pack = lesson_sub.add_parser("pack", help="pack <t_ms>.txt snapshots into a .muplesson")
    pack.add_argument("snapshot_dir", type=Path)
    pack.add_argument("--out", "-o", type=Path, required=True)
    pack.add_argument("--audio-ref", default=None,
                      help="opaque reference to a narration file")
    pack.set_defaults(handler=_cmd_lesson_pack)
    play = lesson_sub.add_parser("play", help="print the text at a playback time")
    play.add_argument("movie", type=Path)
    play.add_argument("--at", type=int, required=True, metavar="T_MS")
    play.set_defaults(handler=_cmd_lesson_play)

    preview = sub.add_parser(
        "preview",
        help="render the traced path and mesh to an image plus a path dump",
    )
    _add_geometry_flags(preview)
    preview.set_defaults(handler=_cmd_preview)

    serve = sub.add_parser("serve", help="run the HTTP compile-and-mesh service")
    serve.add_argument("--port", type=int, default=8373)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--lessons-dir", type=Path, default=None)
    serve.add_argument("--max-body-bytes", type=int, default=256 * 1024)
    serve.add_argument("--time-budget-ms", type=int, default=2000)
    serve.set_defaults(handler=_cmd_serve)

    return parser


def _add_geometry_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("input", type=Path, help="a .mup source file")
    cmd.add_argument("--mode", choices=[m.value for m in TraceMode],
                     default=TraceMode.POLYLINE.value)
    cmd.add_argument("--sides", type=int, default=8, help="tube cross-section sides")
    cmd.add_argument("--radius", type=float, default=0.5, help="tube radius")
    cmd.add_argument("--rows", type=int, default=None, help="parametric grid rows")
    cmd.add_argument("--cols", type=int, default=None, help="parametric grid columns")
    cmd.add_argument("--wrap-rows", action="store_true",
                     help="join the last grid row back to the first")
    cmd.add_argument("--wrap-cols", action="store_true",
                     help="join the last grid column back to the first")
    cmd.add_argument("--out", "-o", type=Path, default=None)


def _read_source(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _geometry_config(args) -> tuple[TraceMode, TubeParams, GridParams | None]:
    mode = TraceMode(args.mode)
    try:
        tube = TubeParams(sides=args.sides, radius=args.radius)
    except ValueError as exc:
        _usage_error(str(exc))
    grid = None
    if mode is TraceMode.PARAMETRIC:
        if args.rows is None or args.cols is None:
            _usage_error("parametric mode requires --rows and --cols")
        try:
            grid = GridParams(rows=args.rows, cols=args.cols,
                              wrap_rows=args.wrap_rows, wrap_cols=args.wrap_cols)
        except ValueError as exc:
            _usage_error(str(exc))
    return mode, tube, grid


def _usage_error(message: str) -> None:
    print(f"usage error: {message}", file=sys.stderr)
    raise SystemExit(2)


def _resolve_limits(args) -> EvalLimits:
    max_steps = getattr(args, "max_steps", None)
    if max_steps is None:
        max_steps = int(os.environ.get("MADEUP_MAX_STEPS", DEFAULT_MAX_STEPS))
    try:
        return EvalLimits(max_steps=max_steps)
    except ValueError as exc:
        _usage_error(str(exc))
    raise AssertionError("unreachable")


def _cmd_run(args) -> int:
    source = _read_source(args.input)

    if args.emit == "ast":
        program = parse_source(source)
        _write_text(args.out, program_to_sexpr(program) + "\n")
        return 0

    mode, tube, grid = _geometry_config(args)
    limits = _resolve_limits(args)
    result = run_source(source, mode=mode, tube=tube, grid=grid, limits=limits,
                        build_mesh=(args.emit == "mesh"))
    _print_warnings(args, result.warnings)

    if args.emit == "path":
        _write_text(args.out, dump_path(result.trace))
        return 0

    options = ExportOptions(format=_resolve_format(args))
    payload = export_mesh(result.mesh, result.trace, options)
    _write_bytes(args.out, payload)
    return 0


def _resolve_format(args) -> ExportFormat:
    if args.format is not None:
        return ExportFormat(args.format)
    if args.out is not None:
        inferred = _EXTENSION_FORMATS.get(args.out.suffix.lower())
        if inferred is not None:
            return inferred
    return ExportFormat.STL_BINARY


def _cmd_ast(args) -> int:
    program = parse_source(_read_source(args.input))
    sys.stdout.write(program_to_sexpr(program) + "\n")
    return 0


def _cmd_lesson_pack(args) -> int:
    snapshots = []
    for entry in sorted(args.snapshot_dir.glob("*.txt"),
                        key=lambda p: int(p.stem)):
        snapshots.append((int(entry.stem), entry.read_text(encoding="utf-8")))
    if not snapshots:
        _usage_error(f"no <t_ms>.txt snapshots in {args.snapshot_dir}")
    movie = lessons.record(snapshots, audio_ref=args.audio_ref)
    args.out.write_text(lessons.dumps(movie), encoding="utf-8")
    print(f"packed {len(snapshots)} snapshots, {len(movie.deltas)} deltas -> {args.out}")
    return 0


def _cmd_lesson_play(args) -> int:
    movie = lessons.loads(args.movie.read_text(encoding="utf-8"))
    sys.stdout.write(lessons.playback_at(movie, args.at))
    return 0


def _cmd_preview(args) -> int:
    from .viz import render_preview

    source = _read_source(args.input)
    mode, tube, grid = _geometry_config(args)
    result = run_source(source, mode=mode, tube=tube, grid=grid)
    _print_warnings(args, result.warnings)

    out = args.out if args.out is not None else args.input.with_suffix(".png")
    render_preview(result.trace, result.mesh, str(out), title=args.input.name)
    path_file = out.with_suffix(".txt")
    path_file.write_text(dump_path(result.trace), encoding="utf-8")
    print(f"wrote {out} and {path_file}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        lessons_dir=args.lessons_dir,
        max_body_bytes=args.max_body_bytes,
        time_budget_ms=args.time_budget_ms,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _print_diagnostics(args, diagnostics) -> None:
    name = getattr(args, "input", None)
    prefix = f"{name}:" if name is not None else ""
    for diag in diagnostics:
        print(f"{prefix}{diag.span.line}:{diag.span.column}: "
              f"{diag.severity.value}: {diag.message}", file=sys.stderr)


def _print_warnings(args, warnings) -> None:
    _print_diagnostics(args, [w for w in warnings if w.severity is Severity.WARNING])


def _write_text(out: Path | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _write_bytes(out: Path | None, payload: bytes) -> None:
    if out is None:
        sys.stdout.buffer.write(payload)
    else:
        out.write_bytes(payload)


if __name__ == "__main__":
    sys.exit(main())
