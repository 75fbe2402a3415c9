"""Matplotlib previews of traced paths and meshes, rendered to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from mpl_toolkits.mplot3d.art3d import Poly3DCollection  # noqa: E402

from .mesh import TriangleMesh  # noqa: E402
from .turtle import PathTrace  # noqa: E402


def render_preview(trace: PathTrace, mesh: TriangleMesh | None,
                   out_path: str, title: str | None = None) -> None:
    """Render the path (and mesh, when present) into a single 3-D figure."""
    fig = plt.figure(figsize=(7, 7))
    ax = fig.add_subplot(projection="3d")

    if mesh is not None and mesh.triangle_count:
        faces = mesh.positions[mesh.triangles]
        collection = Poly3DCollection(
            faces, alpha=0.55, facecolor="#7fa8d9", edgecolor="#2b4a6f",
            linewidths=0.3,
        )
        ax.add_collection3d(collection)

    if trace.vertices:
        pts = np.asarray(trace.vertices)
        ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], color="#c0392b", linewidth=1.2)
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], color="#c0392b", s=6)

    _set_equal_aspect(ax, trace, mesh)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)


def _set_equal_aspect(ax, trace: PathTrace, mesh: TriangleMesh | None) -> None:
    points = []
    if trace.vertices:
        points.append(np.asarray(trace.vertices))
    if mesh is not None and mesh.vertex_count:
        points.append(mesh.positions)
    if not points:
        return
    all_pts = np.concatenate(points)
    center = (all_pts.max(axis=0) + all_pts.min(axis=0)) / 2.0
    half = float((all_pts.max(axis=0) - all_pts.min(axis=0)).max()) / 2.0 or 1.0
    ax.set_xlim(center[0] - half, center[0] + half)
    ax.set_ylim(center[1] - half, center[1] + half)
    ax.set_zlim(center[2] - half, center[2] + half)
