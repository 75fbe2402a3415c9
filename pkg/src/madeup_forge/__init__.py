"""madeup-forge: a Logo-like language whose programs trace paths through 3-D
space, solidified into printable triangle meshes."""

from .ast_nodes import Program, program_to_sexpr, to_sexpr, to_source
from .diagnostics import (
    Diagnostic,
    MadeupError,
    MadeupRuntimeError,
    MadeupSyntaxError,
    MeshError,
    Severity,
    Span,
)
from .exporters import (
    ExportFormat,
    ExportOptions,
    export_mesh,
    write_mesh_json,
    write_obj,
    write_stl_ascii,
    write_stl_binary,
)
from .interpreter import (
    NOTHING,
    Closure,
    Environment,
    EvalLimits,
    Interpreter,
    apply_builtin,
    evaluate,
)
from .lessons import (
    CorruptMovieError,
    EditDelta,
    LessonMovie,
    diff_snapshots,
    playback_at,
    record,
)
from .lexer import Token, TokenKind, tokenize
from .mesh import (
    GridParams,
    TriangleMesh,
    TubeParams,
    ValidationReport,
    build_manual,
    compute_normals,
    sweep_polytube,
    triangulate_grid,
    validate_mesh,
)
from .parser import parse, parse_source
from .pipeline import RunResult, dump_path, run_source
from .turtle import PathTrace, TraceMode, Turtle

__version__ = "0.1.0"

__all__ = [
    "Closure",
    "CorruptMovieError",
    "Diagnostic",
    "EditDelta",
    "Environment",
    "EvalLimits",
    "ExportFormat",
    "ExportOptions",
    "GridParams",
    "Interpreter",
    "LessonMovie",
    "MadeupError",
    "MadeupRuntimeError",
    "MadeupSyntaxError",
    "MeshError",
    "NOTHING",
    "PathTrace",
    "Program",
    "RunResult",
    "Severity",
    "Span",
    "Token",
    "TokenKind",
    "TraceMode",
    "TriangleMesh",
    "TubeParams",
    "Turtle",
    "ValidationReport",
    "apply_builtin",
    "build_manual",
    "compute_normals",
    "diff_snapshots",
    "dump_path",
    "evaluate",
    "export_mesh",
    "parse",
    "parse_source",
    "playback_at",
    "program_to_sexpr",
    "record",
    "run_source",
    "sweep_polytube",
    "to_sexpr",
    "to_source",
    "tokenize",
    "triangulate_grid",
    "validate_mesh",
    "write_mesh_json",
    "write_obj",
    "write_stl_ascii",
    "write_stl_binary",
]
