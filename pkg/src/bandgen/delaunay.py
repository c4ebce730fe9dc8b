"""Incremental Bowyer-Watson Delaunay triangulation.

Points are inserted one at a time into a triangulation seeded with a
large enclosing super-triangle; triangles whose circumcircle contains the
new point are removed and the resulting cavity is re-triangulated from
its boundary.  Predicates that land within ``1e-12`` of zero (collinear
triples, near-cocircular quadruples) raise :class:`DegeneracyError`
instead of guessing, so callers can resample the point set.
"""

from __future__ import annotations

import numpy as np

from .errors import DegeneracyError, InputError

__all__ = ["triangulate"]

_EPS = 1e-12


def _circumcircle(ax, ay, bx, by, cx, cy):
    """Circumcenter and squared radius of triangle abc."""
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < _EPS:
        raise DegeneracyError("triangle is collinear within tolerance")
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    r2 = (ax - ux) ** 2 + (ay - uy) ** 2
    return ux, uy, r2


def triangulate(points: np.ndarray) -> list[tuple[int, int, int]]:
    """Delaunay triangles of a 2-D point set.

    Args:
        points: array of shape (k, 2), k >= 3.

    Returns:
        Sorted index triples, one per triangle.

    Raises:
        DegeneracyError: a collinearity or in-circle test fell inside the
            tolerance band; resample and retry.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InputError(f"expected (k, 2) points, got shape {pts.shape}")
    k = pts.shape[0]
    if k < 3:
        raise InputError(f"triangulation needs at least 3 points, got {k}")

    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    cx, cy = (lo + hi) / 2.0
    span = max(float(hi[0] - lo[0]), float(hi[1] - lo[1]), 1.0)
    coords = [(float(x), float(y)) for x, y in pts]
    coords.append((cx - 40.0 * span, cy - 25.0 * span))
    coords.append((cx + 40.0 * span, cy - 25.0 * span))
    coords.append((cx, cy + 50.0 * span))
    s0, s1, s2 = k, k + 1, k + 2

    def tri_record(a: int, b: int, c: int):
        ux, uy, r2 = _circumcircle(*coords[a], *coords[b], *coords[c])
        return (a, b, c, ux, uy, r2)

    tris = [tri_record(s0, s1, s2)]
    for p in range(k):
        px, py = coords[p]
        bad = []
        keep = []
        for t in tris:
            dx = px - t[3]
            dy = py - t[4]
            delta = t[5] - (dx * dx + dy * dy)
            if abs(delta) <= _EPS * max(1.0, t[5]):
                raise DegeneracyError("point lies on a circumcircle within tolerance")
            (bad if delta > 0.0 else keep).append(t)
        if not bad:
            raise DegeneracyError("insertion point escaped every circumcircle")
        edge_count: dict[tuple[int, int], int] = {}
        for a, b, c, *_ in bad:
            for u, v in ((a, b), (b, c), (a, c)):
                e = (u, v) if u < v else (v, u)
                edge_count[e] = edge_count.get(e, 0) + 1
        tris = keep
        for (u, v), cnt in edge_count.items():
            if cnt == 1:
                tris.append(tri_record(p, u, v))

    out = []
    for a, b, c, *_ in tris:
        if a < k and b < k and c < k:
            out.append(tuple(sorted((a, b, c))))
    return sorted(out)
