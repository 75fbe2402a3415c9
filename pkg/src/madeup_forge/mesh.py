"""Mesh kernel: solidify a traced path into an indexed triangle mesh.

Three construction modes mirror how programs emit geometry: sweeping a
polygonal tube along a polyline, triangulating a row-major parametric grid,
and collecting manually emitted faces. A validation pass reports
boundary/non-manifold edges and the Euler characteristic so printability can
be asserted rather than hoped for.

Triangles wind counterclockwise when seen from outside the solid.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .diagnostics import MeshError
from .turtle import PathTrace, TraceMode

_DUPLICATE_EPS = 1e-9


@dataclass(frozen=True)
class TubeParams:
    sides: int = 8
    radius: float = 0.5
    closure_epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if self.sides < 3:
            raise ValueError("a tube cross-section needs at least 3 sides")
        if self.radius <= 0:
            raise ValueError("tube radius must be positive")
        if self.closure_epsilon < 0:
            raise ValueError("closure epsilon must be non-negative")


@dataclass(frozen=True)
class GridParams:
    rows: int
    cols: int
    wrap_rows: bool = False
    wrap_cols: bool = False

    def __post_init__(self) -> None:
        if self.rows < 2 or self.cols < 2:
            raise ValueError("a parametric grid needs at least 2 rows and 2 columns")


@dataclass
class TriangleMesh:
    positions: np.ndarray  # (V, 3) float64
    triangles: np.ndarray  # (F, 3) int64
    normals: np.ndarray | None = None  # (V, 3) unit vectors

    @classmethod
    def empty(cls) -> "TriangleMesh":
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))

    @property
    def vertex_count(self) -> int:
        return len(self.positions)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)


@dataclass(frozen=True)
class ValidationReport:
    index_ok: bool
    degenerate_count: int
    boundary_edge_count: int
    nonmanifold_edge_count: int
    euler_characteristic: int

    @property
    def watertight(self) -> bool:
        return (
            self.index_ok
            and self.boundary_edge_count == 0
            and self.nonmanifold_edge_count == 0
        )


# ── polytube sweep ────────────────────────────────────────────────────


def collapse_duplicates(vertices: np.ndarray) -> np.ndarray:
    """Drop consecutive vertices closer than 1e-9 (e.g. from `move 0`)."""
    if len(vertices) == 0:
        return vertices.reshape(0, 3)
    keep = [vertices[0]]
    for v in vertices[1:]:
        if np.linalg.norm(v - keep[-1]) >= _DUPLICATE_EPS:
            keep.append(v)
    return np.asarray(keep, dtype=np.float64)


def sweep_polytube(path: PathTrace, params: TubeParams,
                   frame_up: tuple[float, float, float] = (0.0, 0.0, 1.0),
                   frame_fallback: tuple[float, float, float] = (1.0, 0.0, 0.0),
                   ) -> TriangleMesh:
    """Sweep a regular polygon along the path, capping or closing the ends.

    Ring orientation uses parallel-transport (rotation-minimizing) frames:
    the first frame is seeded from the first tangent and `frame_up` (falling
    back to `frame_fallback` when near-parallel); each later frame is the
    previous one carried by the minimal rotation between consecutive station
    tangents. Interior ring planes are normal to the average of the adjacent
    segment tangents. A path whose endpoints coincide within
    `closure_epsilon` closes ring-to-ring instead of being capped.
    """
    pts = collapse_duplicates(np.asarray(path.vertices, dtype=np.float64).reshape(-1, 3))
    if len(pts) < 2:
        raise MeshError("polytube needs at least 2 distinct path vertices")

    closed = bool(np.linalg.norm(pts[0] - pts[-1]) <= params.closure_epsilon)
    if closed:
        pts = pts[:-1]
        if len(pts) < 3:
            raise MeshError("a closed polytube needs at least 3 distinct stations")
    n = len(pts)

    tangents = _segment_tangents(pts, closed)
    stations = _station_tangents(tangents, closed)
    normals = _transport_normals(stations, np.asarray(frame_up, dtype=np.float64),
                                 np.asarray(frame_fallback, dtype=np.float64))
    binormals = np.cross(stations, normals)
    binormals /= np.linalg.norm(binormals, axis=1, keepdims=True)

    sides = params.sides
    theta = 2.0 * np.pi * np.arange(sides) / sides
    ring = (np.cos(theta)[None, :, None] * normals[:, None, :]
            + np.sin(theta)[None, :, None] * binormals[:, None, :])
    positions = (pts[:, None, :] + params.radius * ring).reshape(-1, 3)

    bands = n if closed else n - 1
    i = np.arange(bands)[:, None]
    k = np.arange(sides)[None, :]
    k2 = (k + 1) % sides
    base0 = (i % n) * sides
    base1 = ((i + 1) % n) * sides
    quad_a = base0 + k
    quad_b = base0 + k2
    quad_c = base1 + k
    quad_d = base1 + k2
    tris = [
        np.stack([quad_a, quad_b, quad_d], axis=-1).reshape(-1, 3),
        np.stack([quad_a, quad_d, quad_c], axis=-1).reshape(-1, 3),
    ]
    if not closed:
        start_fan = [(0, kk + 1, kk) for kk in range(1, sides - 1)]
        end_base = (n - 1) * sides
        end_fan = [(end_base, end_base + kk, end_base + kk + 1)
                   for kk in range(1, sides - 1)]
        tris.append(np.asarray(start_fan, dtype=np.int64))
        tris.append(np.asarray(end_fan, dtype=np.int64))
    triangles = np.concatenate(tris).astype(np.int64)

    if closed:
        assert len(positions) == sides * n
        assert len(triangles) == 2 * sides * n
    else:
        assert len(positions) == sides * n
        assert len(triangles) == 2 * sides * (n - 1) + 2 * (sides - 2)
    return TriangleMesh(positions, triangles)


def _segment_tangents(pts: np.ndarray, closed: bool) -> np.ndarray:
    if closed:
        nxt = np.roll(pts, -1, axis=0)
        seg = nxt - pts
    else:
        seg = pts[1:] - pts[:-1]
    norms = np.linalg.norm(seg, axis=1, keepdims=True)
    if np.any(norms < _DUPLICATE_EPS):
        raise MeshError("degenerate path segment after duplicate collapse")
    return seg / norms


def _station_tangents(tangents: np.ndarray, closed: bool) -> np.ndarray:
    """Per-station ring-plane normals: averaged (mitered) adjacent tangents."""
    if closed:
        incoming = np.roll(tangents, 1, axis=0)
        avg = incoming + tangents
        out = np.empty_like(tangents)
        for idx in range(len(tangents)):
            out[idx] = _safe_unit(avg[idx], tangents[idx])
        return out
    n = len(tangents) + 1
    out = np.empty((n, 3))
    out[0] = tangents[0]
    out[-1] = tangents[-1]
    for idx in range(1, n - 1):
        out[idx] = _safe_unit(tangents[idx - 1] + tangents[idx], tangents[idx - 1])
    return out


def _safe_unit(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    # A hairpin (antiparallel tangents) has no miter plane; keep the
    # incoming tangent so the sweep stays defined.
    norm = np.linalg.norm(v)
    if norm < 1e-9:
        return fallback
    return v / norm


def _transport_normals(stations: np.ndarray, up: np.ndarray,
                       fallback: np.ndarray) -> np.ndarray:
    t0 = stations[0]
    seed = up if abs(float(np.dot(up, t0))) < 1.0 - 1e-6 else fallback
    n = seed - np.dot(seed, t0) * t0
    n /= np.linalg.norm(n)

    normals = np.empty_like(stations)
    normals[0] = n
    for idx in range(1, len(stations)):
        prev_t = stations[idx - 1]
        cur_t = stations[idx]
        axis = np.cross(prev_t, cur_t)
        s = np.linalg.norm(axis)
        if s > 1e-12:
            angle = np.arctan2(s, float(np.dot(prev_t, cur_t)))
            n = _rodrigues(n, axis / s, angle)
        # parallel: carry the frame over; antiparallel: the normal is
        # already perpendicular to both tangents, keep it.
        n = n - np.dot(n, cur_t) * cur_t
        n /= np.linalg.norm(n)
        normals[idx] = n
    return normals


def _rodrigues(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    c = np.cos(angle)
    s = np.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1.0 - c)


# ── parametric grid ───────────────────────────────────────────────────


def triangulate_grid(path: PathTrace, params: GridParams) -> TriangleMesh:
    """Triangulate a row-major grid of trace vertices, two triangles per cell.

    Wrap flags add a closing band joining the last row/column back to the
    first, turning an open sheet into a cylinder or torus.
    """
    positions = np.asarray(path.vertices, dtype=np.float64).reshape(-1, 3)
    rows, cols = params.rows, params.cols
    if len(positions) != rows * cols:
        raise MeshError(
            f"grid of {rows}x{cols} needs {rows * cols} vertices, "
            f"trace has {len(positions)}"
        )
    cell_rows = rows - 1 + int(params.wrap_rows)
    cell_cols = cols - 1 + int(params.wrap_cols)
    r = np.arange(cell_rows)[:, None]
    c = np.arange(cell_cols)[None, :]
    i00 = (r % rows) * cols + (c % cols)
    i01 = (r % rows) * cols + ((c + 1) % cols)
    i10 = ((r + 1) % rows) * cols + (c % cols)
    i11 = ((r + 1) % rows) * cols + ((c + 1) % cols)
    t1 = np.stack([i00, i01, i10], axis=-1).reshape(-1, 3)
    t2 = np.stack([i01, i11, i10], axis=-1).reshape(-1, 3)
    triangles = np.concatenate([t1, t2]).astype(np.int64)

    assert len(triangles) == 2 * cell_rows * cell_cols
    return TriangleMesh(positions, triangles)


# ── manual faces ──────────────────────────────────────────────────────


def build_manual(path: PathTrace) -> TriangleMesh:
    """Build a mesh from explicitly emitted vertices and faces."""
    if path.mode is not TraceMode.TRIANGLES:
        raise MeshError("manual meshing requires a triangles-mode trace")
    if not path.faces:
        raise MeshError("no faces were emitted")
    positions = np.asarray(path.vertices, dtype=np.float64).reshape(-1, 3)
    triangles = np.asarray(path.faces, dtype=np.int64)
    if triangles.min() < 0 or triangles.max() >= len(positions):
        raise MeshError("face index out of range")
    for tri in path.faces:
        if len(set(tri)) != 3:
            raise MeshError(f"face {tri} repeats a vertex index")
    return TriangleMesh(positions, triangles)


# ── validation and normals ────────────────────────────────────────────


def validate_mesh(mesh: TriangleMesh) -> ValidationReport:
    """Census the mesh edges; never raises, reports instead."""
    v_count = mesh.vertex_count
    tris = mesh.triangles
    index_ok = True
    degenerate = 0
    directed: Counter[tuple[int, int]] = Counter()

    for a, b, c in tris.tolist():
        if not (0 <= a < v_count and 0 <= b < v_count and 0 <= c < v_count):
            index_ok = False
            continue
        if a == b or b == c or a == c:
            index_ok = False
            degenerate += 1
            continue
        pa, pb, pc = mesh.positions[a], mesh.positions[b], mesh.positions[c]
        if np.linalg.norm(np.cross(pb - pa, pc - pa)) < 1e-12:
            degenerate += 1
        directed[(a, b)] += 1
        directed[(b, c)] += 1
        directed[(c, a)] += 1

    boundary = 0
    nonmanifold = 0
    undirected = {(a, b) if a < b else (b, a) for a, b in directed}
    for u, v in undirected:
        forward = directed.get((u, v), 0)
        backward = directed.get((v, u), 0)
        if forward + backward == 1:
            boundary += 1
        elif not (forward == 1 and backward == 1):
            # Shared by more than two triangles, or by two with the same
            # direction (inconsistent winding).
            nonmanifold += 1

    euler = v_count - len(undirected) + len(tris)
    return ValidationReport(index_ok, degenerate, boundary, nonmanifold, euler)


def compute_normals(mesh: TriangleMesh) -> TriangleMesh:
    """Area-weighted per-vertex normals; isolated vertices get +Z."""
    positions = mesh.positions
    tris = mesh.triangles
    accum = np.zeros_like(positions)
    if len(tris):
        a = positions[tris[:, 0]]
        b = positions[tris[:, 1]]
        c = positions[tris[:, 2]]
        face = np.cross(b - a, c - a)  # length = 2x area, direction = winding
        np.add.at(accum, tris[:, 0], face)
        np.add.at(accum, tris[:, 1], face)
        np.add.at(accum, tris[:, 2], face)
    lengths = np.linalg.norm(accum, axis=1)
    flat = lengths < 1e-12
    accum[flat] = (0.0, 0.0, 1.0)
    lengths[flat] = 1.0
    normals = accum / lengths[:, None]
    return TriangleMesh(positions, tris, normals)


def mesh_from_trace(path: PathTrace, tube: TubeParams | None = None,
                    grid: GridParams | None = None) -> TriangleMesh:
    """Dispatch on the trace mode; the single entry point for CLI/service."""
    if path.mode is TraceMode.POLYLINE:
        return sweep_polytube(path, tube if tube is not None else TubeParams())
    if path.mode is TraceMode.PARAMETRIC:
        if grid is None:
            raise MeshError("parametric mode requires grid dimensions")
        return triangulate_grid(path, grid)
    return build_manual(path)
