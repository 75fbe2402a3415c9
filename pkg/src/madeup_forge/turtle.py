"""3-D turtle: position, orientation frame, and the emitted vertex stream.

The frame is a right-handed orthonormal triad (right, heading, up) with
right x heading = up, re-orthonormalized after every rotation so drift never
accumulates past 1e-9. The initial convention is Logo's "up the page"
generalized: position at the origin, heading +Y, up +Z, right +X.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .diagnostics import MadeupError

Vec3 = tuple[float, float, float]

ORIGIN: Vec3 = (0.0, 0.0, 0.0)
INITIAL_HEADING: Vec3 = (0.0, 1.0, 0.0)
INITIAL_UP: Vec3 = (0.0, 0.0, 1.0)
INITIAL_RIGHT: Vec3 = (1.0, 0.0, 0.0)


class TraceMode(enum.Enum):
    POLYLINE = "polyline"
    PARAMETRIC = "parametric"
    TRIANGLES = "triangles"


class TurtleError(MadeupError):
    """A navigation command received an argument it cannot apply."""


class VertexLimitExceeded(MadeupError):
    """The trace grew past the configured vertex budget."""


@dataclass
class PathTrace:
    """Ordered vertex stream plus, in triangles mode, explicit faces."""

    mode: TraceMode = TraceMode.POLYLINE
    vertices: list[Vec3] = field(default_factory=list)
    faces: list[tuple[int, int, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.vertices)


class Turtle:
    """Mutable turtle owning one trace; never shared between evaluations."""

    def __init__(self, mode: TraceMode = TraceMode.POLYLINE,
                 max_vertices: int | None = None):
        self.position: Vec3 = ORIGIN
        self.heading: Vec3 = INITIAL_HEADING
        self.up: Vec3 = INITIAL_UP
        self.right: Vec3 = INITIAL_RIGHT
        self.trace = PathTrace(mode)
        self.max_vertices = max_vertices

    # ── movement ─────────────────────────────────────────────────

    def move(self, distance: float) -> None:
        """Advance along the heading; the destination joins the trace.

        The first relative move also emits its origin, so a lone `move`
        yields a drawable segment.
        """
        if not math.isfinite(distance):
            raise TurtleError("move distance must be finite")
        if not self.trace.vertices:
            self._emit(self.position)
        x, y, z = self.position
        hx, hy, hz = self.heading
        self.position = (x + distance * hx, y + distance * hy, z + distance * hz)
        self._emit(self.position)

    def moveto(self, x: float, y: float, z: float) -> None:
        """Jump to absolute coordinates; emits exactly one vertex."""
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise TurtleError("moveto coordinates must be finite")
        self.position = (x, y, z)
        self._emit(self.position)

    def _emit(self, vertex: Vec3) -> None:
        if self.max_vertices is not None and len(self.trace.vertices) >= self.max_vertices:
            raise VertexLimitExceeded(f"vertex limit exceeded ({self.max_vertices})")
        self.trace.vertices.append(vertex)

    # ── rotation ─────────────────────────────────────────────────

    def yaw(self, degrees: float) -> None:
        """Rotate heading and right about up (right-hand rule)."""
        c, s = self._angle(degrees)
        self.heading = _rotate(self.heading, self.up, c, s)
        self.right = _rotate(self.right, self.up, c, s)
        self._reorthonormalize()

    def pitch(self, degrees: float) -> None:
        """Rotate heading and up about right."""
        c, s = self._angle(degrees)
        self.heading = _rotate(self.heading, self.right, c, s)
        self.up = _rotate(self.up, self.right, c, s)
        self._reorthonormalize()

    def roll(self, degrees: float) -> None:
        """Rotate right and up about heading."""
        c, s = self._angle(degrees)
        self.right = _rotate(self.right, self.heading, c, s)
        self.up = _rotate(self.up, self.heading, c, s)
        self._reorthonormalize()

    def _angle(self, degrees: float) -> tuple[float, float]:
        if not math.isfinite(degrees):
            raise TurtleError("rotation angle must be finite")
        radians = math.radians(degrees)
        return math.cos(radians), math.sin(radians)

    def _reorthonormalize(self) -> None:
        h = _normalize(self.heading)
        u = _normalize(_reject(self.up, h))
        self.heading = h
        self.up = u
        self.right = _cross(h, u)

    # ── manual faces ─────────────────────────────────────────────

    def emit_face(self, i: int, j: int, k: int) -> None:
        """Record a triangle over already-emitted vertices (triangles mode)."""
        if self.trace.mode is not TraceMode.TRIANGLES:
            raise TurtleError("faces can only be formed in triangles mode")
        count = len(self.trace.vertices)
        for idx in (i, j, k):
            if not 0 <= idx < count:
                raise TurtleError(
                    f"face index {idx} out of range (have {count} vertices)"
                )
        if len({i, j, k}) != 3:
            raise TurtleError(f"face indices must be distinct, got ({i}, {j}, {k})")
        self.trace.faces.append((i, j, k))


def _rotate(v: Vec3, axis: Vec3, c: float, s: float) -> Vec3:
    # Rodrigues: v cos + (axis x v) sin + axis (axis . v)(1 - cos)
    vx, vy, vz = v
    ax, ay, az = axis
    dot = ax * vx + ay * vy + az * vz
    cx = ay * vz - az * vy
    cy = az * vx - ax * vz
    cz = ax * vy - ay * vx
    t = dot * (1.0 - c)
    return (vx * c + cx * s + ax * t,
            vy * c + cy * s + ay * t,
            vz * c + cz * s + az * t)


def _cross(a: Vec3, b: Vec3) -> Vec3:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _normalize(v: Vec3) -> Vec3:
    n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    return (v[0] / n, v[1] / n, v[2] / n)


def _reject(v: Vec3, unit: Vec3) -> Vec3:
    d = v[0] * unit[0] + v[1] * unit[1] + v[2] * unit[2]
    return (v[0] - d * unit[0], v[1] - d * unit[1], v[2] - d * unit[2])
