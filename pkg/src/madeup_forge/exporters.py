"""Mesh serialization: OBJ text, STL (binary and ASCII), and playground JSON.

Binary STL layout is fixed byte-for-byte: an 80-byte header, a little-endian
uint32 triangle count, then 50 bytes per triangle (normal, three vertices as
float32, and a zero attribute word) for a total of 84 + 50*F bytes.
"""

from __future__ import annotations

import enum
import json
import struct
from dataclasses import dataclass

import numpy as np

from .mesh import TriangleMesh, compute_normals
from .turtle import PathTrace

STL_HEADER = b"madeup-forge".ljust(80, b"\x00")


class ExportFormat(enum.Enum):
    OBJ = "obj"
    STL_BINARY = "stl_binary"
    STL_ASCII = "stl_ascii"
    MESH_JSON = "mesh_json"


@dataclass(frozen=True)
class ExportOptions:
    format: ExportFormat = ExportFormat.STL_BINARY
    decimal_digits: int = 6

    def __post_init__(self) -> None:
        if not 1 <= self.decimal_digits <= 17:
            raise ValueError("decimal_digits must be in [1, 17]")


def format_decimal(value: float, digits: int = 6) -> str:
    """Fixed-point with trailing zeros trimmed and -0 normalized to 0."""
    text = f"{value:.{digits}f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text == "-0":
        text = "0"
    return text


def write_obj(mesh: TriangleMesh, decimal_digits: int = 6) -> str:
    lines = []
    for x, y, z in mesh.positions:
        lines.append(
            f"v {format_decimal(x, decimal_digits)}"
            f" {format_decimal(y, decimal_digits)}"
            f" {format_decimal(z, decimal_digits)}"
        )
    for a, b, c in mesh.triangles:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    return "\n".join(lines) + ("\n" if lines else "")


def write_stl_binary(mesh: TriangleMesh) -> bytes:
    count = mesh.triangle_count
    if count >= 2**32:
        raise ValueError("triangle count exceeds the 32-bit STL limit")
    parts = [STL_HEADER, struct.pack("<I", count)]
    record = struct.Struct("<12fH")
    positions = mesh.positions
    for a, b, c in mesh.triangles:
        pa, pb, pc = positions[a], positions[b], positions[c]
        n = _face_normal(pa, pb, pc)
        parts.append(record.pack(*n, *pa, *pb, *pc, 0))
    return b"".join(parts)


def write_stl_ascii(mesh: TriangleMesh, decimal_digits: int = 6) -> str:
    def fmt(v) -> str:
        return " ".join(format_decimal(x, decimal_digits) for x in v)

    lines = ["solid madeup-forge"]
    positions = mesh.positions
    for a, b, c in mesh.triangles:
        pa, pb, pc = positions[a], positions[b], positions[c]
        lines.append(f"facet normal {fmt(_face_normal(pa, pb, pc))}")
        lines.append("  outer loop")
        for p in (pa, pb, pc):
            lines.append(f"    vertex {fmt(p)}")
        lines.append("  endloop")
        lines.append("endfacet")
    lines.append("endsolid madeup-forge")
    return "\n".join(lines) + "\n"


def mesh_json_payload(mesh: TriangleMesh, path: PathTrace | None = None) -> dict:
    """The playground wire format: flat arrays, deterministic key order."""
    if mesh.normals is None:
        mesh = compute_normals(mesh)
    path_vertices: list[float] = []
    if path is not None:
        for vertex in path.vertices:
            path_vertices.extend(float(c) for c in vertex)
    return {
        "positions": [float(x) for x in mesh.positions.reshape(-1)],
        "triangles": [int(i) for i in mesh.triangles.reshape(-1)],
        "normals": [float(x) for x in mesh.normals.reshape(-1)],
        "path": path_vertices,
    }


def write_mesh_json(mesh: TriangleMesh, path: PathTrace | None = None) -> str:
    return json.dumps(mesh_json_payload(mesh, path), separators=(",", ":"))


def export_mesh(mesh: TriangleMesh, path: PathTrace | None,
                options: ExportOptions) -> bytes:
    if options.format is ExportFormat.OBJ:
        return write_obj(mesh, options.decimal_digits).encode()
    if options.format is ExportFormat.STL_BINARY:
        return write_stl_binary(mesh)
    if options.format is ExportFormat.STL_ASCII:
        return write_stl_ascii(mesh, options.decimal_digits).encode()
    return write_mesh_json(mesh, path).encode()


def _face_normal(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    n = np.cross(b - a, c - a)
    length = np.linalg.norm(n)
    if length < 1e-20:
        return np.zeros(3)
    return n / length
