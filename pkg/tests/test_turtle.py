"""Turtle tests: frame conventions, rotation composition, trace semantics.

The independent oracle simulates the same commands with scipy quaternions
and body-frame rotations, never touching the turtle's own Rodrigues math.
"""

import math
import random

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from madeup_forge.parser import parse_source
from madeup_forge.interpreter import Interpreter
from madeup_forge.turtle import TraceMode, Turtle, TurtleError


def close(a, b, tol=1e-9):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


class OracleTurtle:
    """Quaternion-based reference: body axes right=X, heading=Y, up=Z."""

    def __init__(self):
        self.position = np.zeros(3)
        self.orientation = Rotation.identity()
        self.trace: list[np.ndarray] = []

    @property
    def heading(self):
        return self.orientation.apply([0.0, 1.0, 0.0])

    def move(self, d):
        if not self.trace:
            self.trace.append(self.position.copy())
        self.position = self.position + d * self.heading
        self.trace.append(self.position.copy())

    def moveto(self, x, y, z):
        self.position = np.array([x, y, z], dtype=float)
        self.trace.append(self.position.copy())

    def _rotate_body(self, axis, degrees):
        self.orientation = self.orientation * Rotation.from_rotvec(
            math.radians(degrees) * np.asarray(axis)
        )

    def yaw(self, degrees):
        self._rotate_body([0.0, 0.0, 1.0], degrees)

    def pitch(self, degrees):
        self._rotate_body([1.0, 0.0, 0.0], degrees)

    def roll(self, degrees):
        self._rotate_body([0.0, 1.0, 0.0], degrees)


# ── movement ─────────────────────────────────────────────────────────


def test_first_move_emits_origin_and_destination():
    t = Turtle()
    t.move(10)
    assert t.position == (0.0, 10.0, 0.0)
    assert t.trace.vertices == [(0.0, 0.0, 0.0), (0.0, 10.0, 0.0)]


def test_move_zero_still_emits():
    t = Turtle()
    t.move(0)
    assert t.position == (0.0, 0.0, 0.0)
    assert len(t.trace.vertices) == 2


def test_negative_move_reverses_heading():
    t = Turtle()
    t.move(-5)
    assert t.position == (0.0, -5.0, 0.0)


def test_moveto_absolute():
    t = Turtle()
    t.moveto(1, 2, 3)
    assert t.position == (1.0, 2.0, 3.0)
    assert t.trace.vertices == [(1.0, 2.0, 3.0)]


def test_moveto_does_not_prepend_origin():
    t = Turtle()
    t.moveto(1, 0, 0)
    t.moveto(2, 0, 0)
    assert len(t.trace.vertices) == 2


def test_moveto_preserves_orientation():
    t = Turtle()
    before = (t.heading, t.up, t.right)
    t.moveto(5, -2, 8)
    assert (t.heading, t.up, t.right) == before


def test_non_finite_arguments_rejected():
    t = Turtle()
    with pytest.raises(TurtleError):
        t.move(float("nan"))
    with pytest.raises(TurtleError):
        t.moveto(1.0, float("inf"), 0.0)
    with pytest.raises(TurtleError):
        t.yaw(float("inf"))


# ── rotation ─────────────────────────────────────────────────────────


def test_yaw_90_frame():
    t = Turtle()
    t.yaw(90)
    assert close(t.heading, (-1.0, 0.0, 0.0))
    assert close(t.right, (0.0, 1.0, 0.0))
    assert close(t.up, (0.0, 0.0, 1.0))


def test_yaw_360_identity():
    t = Turtle()
    t.yaw(360)
    assert close(t.heading, (0.0, 1.0, 0.0))
    assert close(t.right, (1.0, 0.0, 0.0))
    assert close(t.up, (0.0, 0.0, 1.0))


def test_yaw_composition():
    a, b = 37.5, 104.25
    t1 = Turtle()
    t1.yaw(a)
    t1.yaw(b)
    t2 = Turtle()
    t2.yaw(a + b)
    assert close(t1.heading, t2.heading)
    assert close(t1.up, t2.up)
    assert close(t1.right, t2.right)


def test_rotations_do_not_move_or_emit():
    t = Turtle()
    t.yaw(31)
    t.pitch(-54)
    t.roll(200)
    assert t.position == (0.0, 0.0, 0.0)
    assert t.trace.vertices == []


def test_pitch_and_roll_against_oracle():
    t = Turtle()
    o = OracleTurtle()
    for method, angle in (("pitch", 30), ("roll", -45), ("yaw", 60), ("pitch", 10)):
        getattr(t, method)(angle)
        getattr(o, method)(angle)
    assert close(t.heading, o.heading, 1e-9)


def test_square_trace(square_src):
    turtle = Turtle()
    Interpreter(sink=turtle).run(parse_source(square_src))
    expected = [
        (0.0, 0.0, 0.0),
        (0.0, 10.0, 0.0),
        (-10.0, 10.0, 0.0),
        (-10.0, 0.0, 0.0),
        (0.0, 0.0, 0.0),
    ]
    assert len(turtle.trace.vertices) == 5
    for got, want in zip(turtle.trace.vertices, expected):
        assert close(got, want)


def test_circle_trace(circle_src):
    turtle = Turtle()
    Interpreter(sink=turtle).run(parse_source(circle_src))
    vertices = turtle.trace.vertices
    assert len(vertices) == 21
    assert close(vertices[0], (0.0, 0.0, 3.0))
    assert close(vertices[0], vertices[-1])
    for v in vertices:
        assert abs(v[1]) <= 1e-9
        assert abs(math.hypot(v[0], v[2]) - 3.0) <= 1e-9


# ── properties ────────────────────────────────────────────────────────


def frame_errors(t: Turtle):
    h, u, r = np.array(t.heading), np.array(t.up), np.array(t.right)
    dots = max(abs(h @ u), abs(h @ r), abs(u @ r))
    norms = max(abs(np.linalg.norm(v) - 1.0) for v in (h, u, r))
    handed = np.max(np.abs(np.cross(r, h) - u))
    return dots, norms, handed


def test_orthonormal_after_thousand_random_rotations():
    rng = random.Random(20260809)
    t = Turtle()
    rotations = [t.yaw, t.pitch, t.roll]
    for _ in range(1000):
        rng.choice(rotations)(rng.uniform(-720.0, 720.0))
    dots, norms, handed = frame_errors(t)
    assert dots < 1e-9
    assert norms < 1e-9
    assert handed < 1e-9


def test_random_walks_match_quaternion_oracle():
    rng = random.Random(17)
    for _ in range(25):
        t = Turtle()
        o = OracleTurtle()
        for _ in range(rng.randrange(1, 40)):
            op = rng.randrange(5)
            if op == 0:
                d = rng.uniform(-10, 10)
                t.move(d)
                o.move(d)
            elif op == 1:
                x, y, z = (rng.uniform(-5, 5) for _ in range(3))
                t.moveto(x, y, z)
                o.moveto(x, y, z)
            else:
                angle = rng.uniform(-360, 360)
                name = ("yaw", "pitch", "roll")[op - 2]
                getattr(t, name)(angle)
                getattr(o, name)(angle)
        assert len(t.trace.vertices) == len(o.trace)
        for got, want in zip(t.trace.vertices, o.trace):
            assert close(got, want, 1e-8)


def test_trace_length_formula():
    rng = random.Random(4)
    for _ in range(50):
        t = Turtle()
        moves = movetos = 0
        move_before_any_vertex = False
        for _ in range(rng.randrange(0, 30)):
            if rng.random() < 0.5:
                if not t.trace.vertices:
                    move_before_any_vertex = True
                t.move(rng.uniform(-3, 3))
                moves += 1
            else:
                t.moveto(rng.uniform(-3, 3), 0, 0)
                movetos += 1
        expected = moves + movetos + (1 if move_before_any_vertex else 0)
        assert len(t.trace.vertices) == expected


# ── manual faces ─────────────────────────────────────────────────────


def triangle_turtle():
    t = Turtle(TraceMode.TRIANGLES)
    t.moveto(0, 0, 0)
    t.moveto(1, 0, 0)
    t.moveto(0, 1, 0)
    return t


def test_emit_face_records_winding():
    t = triangle_turtle()
    t.emit_face(0, 1, 2)
    assert t.trace.faces == [(0, 1, 2)]


def test_emit_face_duplicate_index_rejected():
    t = triangle_turtle()
    with pytest.raises(TurtleError):
        t.emit_face(0, 0, 1)


def test_emit_face_out_of_range_rejected():
    t = triangle_turtle()
    with pytest.raises(TurtleError):
        t.emit_face(0, 1, 3)


def test_quad_as_two_triangles():
    t = Turtle(TraceMode.TRIANGLES)
    for x, y in ((0, 0), (1, 0), (1, 1), (0, 1)):
        t.moveto(x, y, 0)
    t.emit_face(0, 1, 2)
    t.emit_face(0, 2, 3)
    assert t.trace.faces == [(0, 1, 2), (0, 2, 3)]


def test_emit_face_wrong_mode():
    t = Turtle(TraceMode.POLYLINE)
    t.moveto(0, 0, 0)
    t.moveto(1, 0, 0)
    t.moveto(0, 1, 0)
    with pytest.raises(TurtleError):
        t.emit_face(0, 1, 2)
