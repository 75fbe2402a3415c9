"""Acceptance criteria, one test per criterion, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the pass/fail lines.
Every tolerance is pinned here; nothing is deferred to calibration.
"""

import json
import math
import random
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np
import pytest
from fastapi.testclient import TestClient

from madeup_forge.exporters import write_obj, write_stl_binary
from madeup_forge.interpreter import NOTHING, Interpreter
from madeup_forge.lessons import dumps, playback_at, record
from madeup_forge.mesh import (
    GridParams,
    TubeParams,
    sweep_polytube,
    triangulate_grid,
    validate_mesh,
)
from madeup_forge.parser import parse_source
from madeup_forge.pipeline import run_source
from madeup_forge.service import create_app
from madeup_forge.turtle import PathTrace, TraceMode, Turtle

from conftest import CIRCLE_SRC, SQUARE_SRC, WAVE_SRC


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


# ── Criterion 1: the square frame ────────────────────────────────────


def test_square_frame_program():
    with criterion("square frame: oracle path, tube counts, watertight"):
        started = time.perf_counter()
        result = run_source(SQUARE_SRC, tube=TubeParams(sides=4))
        elapsed = time.perf_counter() - started

        expected = _square_path_oracle()
        assert len(result.trace.vertices) == 5
        for got, want in zip(result.trace.vertices, expected):
            assert np.allclose(got, want, atol=1e-9)

        assert result.mesh.vertex_count == 16
        assert result.mesh.triangle_count == 32
        report = validate_mesh(result.mesh)
        assert report.watertight
        assert report.euler_characteristic == 0
        assert elapsed < 0.1, f"took {elapsed:.3f}s"


def _square_path_oracle():
    """Rotation-matrix oracle: heading starts +Y, each yaw is Rz(90 deg)."""
    theta = math.radians(90.0)
    rz = np.array([
        [math.cos(theta), -math.sin(theta), 0.0],
        [math.sin(theta), math.cos(theta), 0.0],
        [0.0, 0.0, 1.0],
    ])
    heading = np.array([0.0, 1.0, 0.0])
    position = np.zeros(3)
    path = [position.copy()]
    for _ in range(4):
        position = position + 10.0 * heading
        path.append(position.copy())
        heading = rz @ heading
    return path


# ── Criterion 2: the circle of stops ─────────────────────────────────


def test_circle_program():
    with criterion("circle of stops: 21 stops, closed, y=0, radius 3"):
        started = time.perf_counter()
        result = run_source(CIRCLE_SRC, build_mesh=False)
        elapsed = time.perf_counter() - started

        vertices = result.trace.vertices
        assert len(vertices) == 21
        assert np.allclose(vertices[0], vertices[-1], atol=1e-9)
        for i, v in enumerate(vertices):
            angle = i / 20 * 2 * math.pi  # reference evaluation of the formula
            assert abs(v[1]) <= 1e-9
            assert abs(math.hypot(v[0], v[2]) - 3.0) <= 1e-9
            assert np.allclose(v, (3 * math.sin(angle), 0.0, 3 * math.cos(angle)),
                               atol=1e-9)
        assert elapsed < 0.1, f"took {elapsed:.3f}s"


# ── Criterion 3: the sinusoidal wave ─────────────────────────────────


def test_wave_program():
    with criterion("wave surface: 10201 vertices, 20000 triangles, perimeter boundary"):
        started = time.perf_counter()
        result = run_source(WAVE_SRC, mode=TraceMode.PARAMETRIC,
                            grid=GridParams(rows=101, cols=101))
        elapsed = time.perf_counter() - started

        assert result.mesh.vertex_count == 10201
        assert result.mesh.triangle_count == 20000
        vertex = result.mesh.positions[4 * 101 + 3]  # (c=3, r=4)
        assert abs(vertex[2] - 2 * math.sin(5.0)) <= 1e-9

        report = validate_mesh(result.mesh)
        assert report.nonmanifold_edge_count == 0
        assert report.boundary_edge_count == 400
        _assert_boundary_on_perimeter(result.mesh, rows=101, cols=101)
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def _assert_boundary_on_perimeter(mesh, rows, cols):
    from collections import Counter

    edges = Counter()
    for a, b, c in mesh.triangles.tolist():
        for u, v in ((a, b), (b, c), (c, a)):
            edges[(u, v) if u < v else (v, u)] += 1
    for (u, v), count in edges.items():
        if count == 1:
            for idx in (u, v):
                r, c = divmod(idx, cols)
                assert r in (0, rows - 1) or c in (0, cols - 1), (r, c)


# ── Criterion 4: semantics suite ─────────────────────────────────────


def test_semantics_suite():
    with criterion("semantics: block/loop/conditional values, closure snapshot"):
        def value_of(src):
            return Interpreter(sink=Turtle()).run(parse_source(src))

        assert value_of("x = 1\nx + 1") == 2.0
        assert value_of("for i to 4\n  i * 10\nend") == 40.0
        assert value_of("repeat 3\n  7\nend") == 7.0
        assert value_of("repeat 0\n  7\nend") is NOTHING
        assert value_of("for i in 5..2\n  i\nend") is NOTHING
        assert value_of("x = 1\nif x < 3\n  10\nelse\n  20\nend") == 10.0
        assert value_of("x = 5\nif x < 3\n  10\nelse\n  20\nend") == 20.0
        assert value_of("x = 5\nif x < 3\n  10\nend") is NOTHING
        assert value_of("a = 2\nf x = a * x\na = 5\nf 3") == 6.0


# ── Criterion 5: geometry property suite ─────────────────────────────


def test_geometry_property_suite():
    with criterion("geometry: 200 random tubes watertight, counts, rigidity"):
        rng = random.Random(0xFACADE)
        for index in range(200):
            radius = rng.uniform(0.05, 0.5)
            sides = rng.randrange(3, 13)
            params = TubeParams(sides=sides, radius=radius)
            points = _random_walk(rng, radius)
            mesh = sweep_polytube(PathTrace(TraceMode.POLYLINE, points), params)

            n = len(points)
            assert mesh.vertex_count == sides * n
            assert mesh.triangle_count == 2 * sides * (n - 1) + 2 * (sides - 2)
            report = validate_mesh(mesh)
            assert report.watertight, (index, points)
            assert report.euler_characteristic == 2

            if index % 10 == 0:
                _check_rigid_invariance(points, params, mesh, rng)


def _random_walk(rng, radius):
    n = rng.randrange(3, 31)
    points = [np.zeros(3)]
    while len(points) < n:
        direction = np.array([rng.gauss(0, 1) for _ in range(3)])
        norm = np.linalg.norm(direction)
        if norm < 1e-6:
            continue
        direction /= norm
        step = rng.uniform(10 * radius, 40 * radius)
        candidate = points[-1] + step * direction
        if len(points) == n - 1 and np.linalg.norm(candidate - points[0]) < 10 * radius:
            continue  # non-self-returning
        points.append(candidate)
    return [tuple(p) for p in points]


def _check_rigid_invariance(points, params, mesh, rng):
    angle = rng.uniform(0, 2 * math.pi)
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    offset = np.array([rng.uniform(-20, 20) for _ in range(3)])
    moved = [tuple(rot @ np.asarray(p) + offset) for p in points]
    moved_mesh = sweep_polytube(PathTrace(TraceMode.POLYLINE, moved), params)
    assert np.allclose(moved_mesh.positions, mesh.positions @ rot.T + offset,
                       atol=1e-6)


# ── Criterion 6: export suite ────────────────────────────────────────


def test_export_suite():
    with criterion("export: OBJ/STL round trips, 84 + 50F bytes on 50 meshes"):
        rng = random.Random(31415)
        for _ in range(50):
            mesh = _random_mesh(rng)
            blob = write_stl_binary(mesh)
            assert len(blob) == 84 + 50 * mesh.triangle_count

            # STL round trip: float32 vertices in order.
            (count,) = struct.unpack_from("<I", blob, 80)
            assert count == mesh.triangle_count
            offset = 84
            for tri in mesh.triangles:
                values = struct.unpack_from("<12fH", blob, offset)
                flat = np.asarray(mesh.positions[tri], dtype=np.float32).reshape(-1)
                assert tuple(np.float32(values[3:12])) == tuple(flat)
                offset += 50

            # OBJ round trip: printed precision and exact triangles.
            digits = 9
            positions, triangles = [], []
            for line in write_obj(mesh, digits).splitlines():
                parts = line.split()
                if parts and parts[0] == "v":
                    positions.append([float(x) for x in parts[1:]])
                elif parts and parts[0] == "f":
                    triangles.append([int(x) - 1 for x in parts[1:]])
            assert triangles == mesh.triangles.tolist()
            assert np.allclose(positions, mesh.positions, atol=10.0**-digits)


def _random_mesh(rng):
    if rng.random() < 0.5:
        points = _random_walk(rng, 0.2)
        return sweep_polytube(PathTrace(TraceMode.POLYLINE, points),
                              TubeParams(sides=rng.randrange(3, 9), radius=0.2))
    rows, cols = rng.randrange(2, 8), rng.randrange(2, 8)
    grid_points = [(c * 1.0, r * 1.0, rng.uniform(-2, 2))
                   for r in range(rows) for c in range(cols)]
    return triangulate_grid(PathTrace(TraceMode.PARAMETRIC, grid_points),
                            GridParams(rows=rows, cols=cols))


# ── Criterion 7: lesson suite ────────────────────────────────────────


def test_lesson_suite():
    with criterion("lessons: 500 random sessions replay exactly, <15% encoding"):
        rng = random.Random(2024)
        alphabet = "abcdefgh \nmove=+*()0123456789"
        for _ in range(500):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 30)))
            snapshots = [(0, text)]
            t = 0
            for _ in range(rng.randrange(0, 15)):
                t += rng.randrange(1, 400)
                kind = rng.randrange(3)
                if text and kind == 0:
                    start = rng.randrange(len(text))
                    length = rng.randrange(1, len(text) - start + 1)
                    text = text[:start] + text[start + length:]
                elif text and kind == 1:
                    start = rng.randrange(len(text))
                    length = rng.randrange(1, len(text) - start + 1)
                    chunk = "".join(rng.choice(alphabet)
                                    for _ in range(rng.randrange(0, 8)))
                    text = text[:start] + chunk + text[start + length:]
                else:
                    at = rng.randrange(len(text) + 1)
                    chunk = "".join(rng.choice(alphabet)
                                    for _ in range(rng.randrange(1, 8)))
                    text = text[:at] + chunk + text[at:]
                snapshots.append((t, text))

            movie = record(snapshots)
            for t_ms, expected in snapshots:
                assert playback_at(movie, t_ms) == expected

        # Encoding target: 100 one-character-apart snapshots of >= 200 chars.
        base = ("x = 1\n" + "move x\nyaw 15\n" * 21)[:300]
        snapshots = [(0, base)]
        text = base
        for frame in range(1, 100):
            offset = (frame * 53) % len(text)
            text = text[:offset] + chr(ord("a") + frame % 26) + text[offset + 1:]
            snapshots.append((frame * 500, text))
        movie = record(snapshots)
        encoded = len(dumps(movie).encode())
        concatenated = sum(len(t.encode()) for _, t in snapshots)
        assert all(len(t) >= 200 for _, t in snapshots)
        assert encoded < 0.15 * concatenated, (encoded, concatenated)


# ── Criterion 8: service suite ───────────────────────────────────────


def test_service_suite(tmp_path):
    with criterion("service: mesh response, 422 diagnostics, limits, isolation"):
        lessons_dir = tmp_path / "lessons"
        lessons_dir.mkdir()
        app = create_app(lessons_dir=lessons_dir)  # default 2 s budget
        with TestClient(app) as client:
            response = client.post("/api/run", json={
                "source": SQUARE_SRC, "mode": "polyline", "tube": {"sides": 4},
            })
            assert response.status_code == 200
            assert len(response.json()["mesh"]["triangles"]) == 96

            response = client.post("/api/run", json={"source": "repeat"})
            assert response.status_code == 422
            (diag,) = response.json()["diagnostics"]
            assert diag["line"] == 1 and "column" in diag

            started = time.monotonic()
            response = client.post("/api/run", json={
                "source": "repeat 1000000000\n  move 1\nend",
            })
            elapsed = time.monotonic() - started
            assert response.status_code == 422
            assert "limit exceeded" in response.json()["diagnostics"][0]["message"]
            assert elapsed < 3.5, f"took {elapsed:.2f}s"

            def run_one(i):
                reply = client.post("/api/run", json={
                    "source": f"a = {i}\nmove a\n", "tube": {"sides": 3},
                })
                assert reply.status_code == 200, reply.text
                return i, reply.json()["mesh"]["path"]

            with ThreadPoolExecutor(max_workers=16) as pool:
                for i, path in pool.map(run_one, range(1, 51)):
                    assert path == [0.0, 0.0, 0.0, 0.0, float(i), 0.0]
