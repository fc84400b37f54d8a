"""Planar convex hulls and polygon distances."""

from dataclasses import dataclass

import numpy as np

COLLINEAR_TOL = 1e-12
DUPLICATE_TOL = 1e-12


@dataclass(frozen=True)
class Polygon2D:
    """Convex polygon, vertices counterclockwise in an ``(m, 2)`` array.

    One vertex is a point, two vertices a segment.
    """

    vertices: np.ndarray

    def __len__(self):
        return len(self.vertices)

    @property
    def diameter(self):
        v = self.vertices
        if len(v) < 2:
            return 0.0
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))

    def edges(self):
        """Segment endpoints ``(a, b)``, each ``(m, 2)``; closed for m >= 3."""
        v = self.vertices
        if len(v) == 1:
            return v, v
        if len(v) == 2:
            return v[:1], v[1:]
        return v, np.roll(v, -1, axis=0)


def _turn(o, a, b):
    # sine of the turn angle at a; zero-length edges count as collinear
    e1 = (a[0] - o[0], a[1] - o[1])
    e2 = (b[0] - a[0], b[1] - a[1])
    n1 = np.hypot(*e1)
    n2 = np.hypot(*e2)
    if n1 <= DUPLICATE_TOL or n2 <= DUPLICATE_TOL:
        return 0.0
    return (e1[0] * e2[1] - e1[1] * e2[0]) / (n1 * n2)


def convex_hull(points):
    """Andrew's monotone chain.  Collinear and duplicate vertices are dropped."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("convex hull of an empty point set")
    pts = np.unique(pts, axis=0)  # lexicographic sort
    if len(pts) == 1:
        return Polygon2D(pts.copy())
    plist = [tuple(p) for p in pts]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _turn(out[-2], out[-1], p) <= COLLINEAR_TOL:
                out.pop()
            if out and np.hypot(p[0] - out[-1][0], p[1] - out[-1][1]) <= DUPLICATE_TOL:
                continue
            out.append(p)
        return out

    lower = chain(plist)
    upper = chain(reversed(plist))
    verts = lower[:-1] + upper[:-1]
    if len(verts) < 2:
        # everything within DUPLICATE_TOL of one point
        verts = [plist[0]] if len(verts) == 0 else verts
    return Polygon2D(np.array(verts, dtype=float))


def _segment_distances(x, a, b):
    # x (n, 2); a, b (m, 2) -> (n, m)
    ab = b - a
    len2 = np.sum(ab * ab, axis=1)
    ax = x[:, None, :] - a[None, :, :]
    t = np.where(len2 > 0, np.sum(ax * ab[None], axis=2) / np.where(len2 > 0, len2, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a[None] + t[..., None] * ab[None]
    return np.hypot(*(x[:, None, :] - closest).transpose(2, 0, 1))


def distances(pg, x, chunk=2048):
    """Euclidean distance from each point of ``x`` to the closed polygon region."""
    x = np.asarray(x, dtype=float).reshape(-1, 2)
    a, b = pg.edges()
    out = np.zeros(len(x))
    for start in range(0, len(x), chunk):
        xs = x[start:start + chunk]
        outside = np.ones(len(xs), dtype=bool)
        if len(pg) >= 3:
            e = b - a
            rel = xs[:, None, :] - a[None]
            cross = e[None, :, 0] * rel[..., 1] - e[None, :, 1] * rel[..., 0]
            outside = np.any(cross < 0, axis=1)
        if np.any(outside):
            dist = _segment_distances(xs[outside], a, b).min(axis=1)
            out[start:start + chunk][outside] = dist
    return out


def hausdorff(p, q):
    """Two-sided Hausdorff distance between the regions of two convex polygons.

    For convex regions it suffices to measure vertices against the other region.
    """
    return float(max(distances(q, p.vertices).max(), distances(p, q.vertices).max()))


def contains(pg, x, tol=COLLINEAR_TOL):
    return bool(distances(pg, x)[0] <= tol)
