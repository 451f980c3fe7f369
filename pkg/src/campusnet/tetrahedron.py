"""Tetrahedral summaries of attribute z-scores.

The four attribute z-scores of a partition are clamped at zero,
normalized to sum to one, and used as barycentric coordinates in a fixed
tetrahedron, one vertex per attribute:

    major       (1, 0, 0)
    residence   (cos 2pi/3, sin 2pi/3, 0)
    year        (cos 4pi/3, sin 4pi/3, 0)
    high_school (0, 0, sqrt 2)

A partition dominated by one attribute sits at that vertex; balanced
partitions sit near the centroid. The six detector runs of one view
reduce to a center point, a spread (binned in 0.1 steps), and the
center's distance to the year vertex. For plotting, points are projected
into the face opposite the year vertex, orthographically by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, floor, pi, sin, sqrt

import numpy as np

from .errors import DegenerateInputError

__all__ = [
    "VERTEX_ORDER",
    "TETRA_VERTICES",
    "TetraPoint",
    "TetraSummary",
    "normalize_zscores",
    "tetra_point",
    "barycentric_coordinates",
    "summarize_runs",
    "project_year_view",
]

VERTEX_ORDER = ("major", "residence", "year", "high_school")

TETRA_VERTICES = {
    "major": np.array([1.0, 0.0, 0.0]),
    "residence": np.array([cos(2.0 * pi / 3.0), sin(2.0 * pi / 3.0), 0.0]),
    "year": np.array([cos(4.0 * pi / 3.0), sin(4.0 * pi / 3.0), 0.0]),
    "high_school": np.array([0.0, 0.0, sqrt(2.0)]),
}

_V = np.stack([TETRA_VERTICES[a] for a in VERTEX_ORDER])

#: bin width for the spread of the six runs
SIZE_BIN_WIDTH = 0.1


@dataclass(frozen=True)
class TetraPoint:
    """One partition's normalized scores and embedded position.

    ``zeroed`` names attributes whose z-score entered as 0 because it was
    degenerate (NaN) upstream.
    """

    z_norm: np.ndarray
    x: np.ndarray
    zeroed: tuple


@dataclass(frozen=True)
class TetraSummary:
    """Center and spread of the six detector runs of one view."""

    center: np.ndarray
    max_distance: float
    size_bin: int
    year_distance: float


def _quad_values(quad):
    """Z-scores in vertex order from a mapping, quad object, or sequence."""
    if hasattr(quad, "z") and isinstance(quad.z, dict):
        quad = quad.z
    if isinstance(quad, dict):
        missing = [a for a in VERTEX_ORDER if a not in quad]
        if missing:
            raise ValueError("missing z-scores for: %s" % ", ".join(missing))
        return np.array([float(quad[a]) for a in VERTEX_ORDER])
    values = np.asarray(quad, dtype=np.float64)
    if values.shape != (4,):
        raise ValueError("expected 4 z-scores, got shape %s" % (values.shape,))
    return values.copy()


def normalize_zscores(quad):
    """Clamped, normalized z-scores in vertex order.

    Negative values are clamped to 0 before normalizing; NaN (degenerate
    upstream) enters as 0. All-nonpositive input cannot be normalized.

    Raises
    ------
    DegenerateInputError
        If no z-score is positive.
    """
    values = _quad_values(quad)
    values[~np.isfinite(values)] = 0.0
    values[values < 0.0] = 0.0
    total = values.sum()
    if total <= 0.0:
        raise DegenerateInputError(
            "no positive z-score; cannot place on the tetrahedron")
    return values / total


def tetra_point(quad):
    """Embed one partition's z-scores into the tetrahedron."""
    raw = _quad_values(quad)
    zeroed = tuple(a for a, v in zip(VERTEX_ORDER, raw) if not np.isfinite(v))
    z_norm = normalize_zscores(raw)
    x = z_norm @ _V
    return TetraPoint(z_norm=z_norm, x=x, zeroed=zeroed)


def barycentric_coordinates(x):
    """Barycentric coordinates of a 3D point, inverse of `tetra_point`."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (3,):
        raise ValueError("expected a 3D point")
    t = (_V[:3] - _V[3]).T
    z123 = np.linalg.solve(t, x - _V[3])
    return np.append(z123, 1.0 - z123.sum())


def summarize_runs(points):
    """Summary of the six detector runs of one view.

    Parameters
    ----------
    points : sequence of TetraPoint (or of 3D positions), length 6

    Returns
    -------
    TetraSummary
        Mean position, maximum pairwise distance, that distance binned
        in steps of 0.1, and the distance from the center to the year
        vertex.
    """
    xs = np.array([p.x if isinstance(p, TetraPoint) else np.asarray(p)
                   for p in points], dtype=np.float64)
    if xs.shape != (6, 3):
        raise ValueError("expected exactly 6 points, got %d" % len(points))
    center = xs.mean(axis=0)
    diffs = xs[:, None, :] - xs[None, :, :]
    max_distance = float(np.sqrt((diffs ** 2).sum(axis=2)).max())
    size_bin = int(floor(max_distance / SIZE_BIN_WIDTH))
    year_distance = float(np.linalg.norm(center - TETRA_VERTICES["year"]))
    return TetraSummary(center=center, max_distance=max_distance,
                        size_bin=size_bin, year_distance=year_distance)


def _face_frame():
    """Orthonormal frame of the face opposite the year vertex."""
    p1, p2, p4 = _V[0], _V[1], _V[3]
    origin = (p1 + p2 + p4) / 3.0
    normal = np.cross(p2 - p1, p4 - p1)
    normal /= np.linalg.norm(normal)
    if normal @ (TETRA_VERTICES["year"] - origin) > 0:
        normal = -normal  # point away from the year vertex
    e1 = (p1 - origin) / np.linalg.norm(p1 - origin)
    e2 = np.cross(normal, e1)
    return origin, normal, e1, e2


_FRAME = _face_frame()


def project_year_view(x, perspective=False, height=1.0):
    """Project 3D points into the face opposite the year vertex.

    Parameters
    ----------
    x : array_like, shape (3,) or (k, 3)
    perspective : bool, default False
        Project from a viewpoint ``height`` beyond the year vertex
        instead of orthographically along the face normal.
    height : float, default 1.0

    Returns
    -------
    ndarray of shape (2,) or (k, 2)
    """
    origin, normal, e1, e2 = _FRAME
    pts = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if pts.shape[1] != 3:
        raise ValueError("expected 3D points")
    if perspective:
        eye = TETRA_VERTICES["year"] - height * normal
        denom = (pts - eye) @ normal
        if np.any(np.abs(denom) < 1e-12):
            raise ValueError("point lies in the viewing plane")
        t = ((origin - eye) @ normal) / denom
        pts = eye + t[:, None] * (pts - eye)
    rel = pts - origin
    flat = np.column_stack((rel @ e1, rel @ e2))
    return flat[0] if np.asarray(x).ndim == 1 else flat
