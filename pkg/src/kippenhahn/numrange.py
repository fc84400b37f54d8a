"""Numerical range of ``F_1 + i F_2`` and its boundary generating curve.

Everything is driven by the eigen-branches of ``A(theta) = cos(theta) F_1 +
sin(theta) F_2`` on a uniform angle grid.  The top eigenvalue is the support
function of the numerical range; every branch ``lambda_j`` together with its
angular derivative gives one point of the boundary generating curve via the
tangent formula

    x(theta) = lambda * (cos, sin) + lambda' * (-sin, cos).

Angles are processed as one batch; results are ordered by angle index, then
branch index.
"""

from dataclasses import dataclass

import numpy as np

from .hull2d import convex_hull, hausdorff
from .linalg import det_complex, eig_hermitian
from .pencil import check_unit

DEFAULT_GRID = 720
CLUSTER_TOL = 1e-8
THEOREM_TOL = 1e-5
CURVE_TOL = 1e-7
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class CurveSample:
    theta: float
    branch: int
    lam: float
    lam_prime: float
    point: tuple


@dataclass(frozen=True)
class SupportLine:
    theta: float
    h: float
    touch_points: tuple  # one or two (x1, x2) pairs

    @property
    def normal(self):
        return np.array([np.cos(self.theta), np.sin(self.theta)])


@dataclass(frozen=True)
class TheoremReport:
    hausdorff: float
    scale: float
    passed: bool


@dataclass(frozen=True)
class CurveInRangeReport:
    max_violation: float
    scale: float
    passed: bool


def theta_grid(n):
    if n < 1:
        raise ValueError("grid size must be positive")
    return 2.0 * np.pi * np.arange(n) / n


def clusters(eigenvalues, tol=CLUSTER_TOL):
    """Split ascending eigenvalues into runs of nearly equal values.

    Consecutive values closer than ``tol * (1 + max|eigenvalue|)`` share a
    cluster.  Returns a list of ``(start, stop)`` index ranges.
    """
    w = np.asarray(eigenvalues)
    gap = tol * (1.0 + np.max(np.abs(w)))
    out = []
    start = 0
    for j in range(1, len(w) + 1):
        if j == len(w) or w[j] - w[j - 1] >= gap:
            out.append((start, j))
            start = j
    return out


def residual_bound(pencil, tol=RESIDUAL_TOL):
    return tol * (1.0 + pencil.norm) ** pencil.d


def nr_map(pencil, psi):
    """``(<psi|F_1 psi>, <psi|F_2 psi>)`` for a unit vector ``psi``."""
    pencil._require_planar()
    return pencil.forms(check_unit(psi))


@dataclass
class Branches:
    """Eigen-branch data on a batch of angles, array form."""

    theta: np.ndarray  # (n,)
    lam: np.ndarray  # (n, d) ascending
    lam_prime: np.ndarray  # (n, d)
    vectors: np.ndarray  # (n, d, d), column j is branch j
    top_start: np.ndarray  # (n,) first index of the top eigenvalue cluster

    @property
    def points(self):
        """Tangent-formula points, shape ``(n, d, 2)``."""
        c = np.cos(self.theta)[:, None]
        s = np.sin(self.theta)[:, None]
        x1 = self.lam * c - self.lam_prime * s
        x2 = self.lam * s + self.lam_prime * c
        return np.stack([x1, x2], axis=-1)


def branches(pencil, thetas, tol=CLUSTER_TOL):
    """Eigen-branches of ``A(theta)`` with Hellmann-Feynman derivatives.

    For a simple eigenvalue the derivative is ``<psi|A'(theta)|psi>``.  Inside
    a degenerate cluster an arbitrary eigenbasis gives wrong derivatives, so
    ``A'`` is compressed to the cluster eigenspace and diagonalized; its
    eigenvalues are the derivatives and its eigenvectors, lifted back,
    replace the cluster basis.
    """
    pencil._require_planar()
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    lam, vecs = eig_hermitian(pencil.aggregate_A(thetas))
    dA = pencil.aggregate_A_prime(thetas)
    lam_prime = np.einsum("nji,njk,nki->ni", vecs.conj(), dA, vecs).real
    d = pencil.d
    top_start = np.full(len(thetas), d - 1)

    gap = tol * (1.0 + np.max(np.abs(lam), axis=1, keepdims=True))
    close = np.diff(lam, axis=1) < gap
    for i in np.nonzero(close.any(axis=1))[0]:
        for start, stop in clusters(lam[i], tol):
            if stop - start < 2:
                continue
            basis = vecs[i][:, start:stop]
            compressed = basis.conj().T @ dA[i] @ basis
            mu, w = eig_hermitian(0.5 * (compressed + compressed.conj().T))
            vecs[i][:, start:stop] = basis @ w
            lam_prime[i, start:stop] = mu
            if stop == d:
                top_start[i] = start
    return Branches(thetas, lam, lam_prime, vecs, top_start)


def _support_lines(pencil, br):
    lines = []
    for i, theta in enumerate(br.theta):
        vecs = br.vectors[i]
        top = pencil.forms(vecs[:, -1])
        pts = [tuple(top)]
        if br.top_start[i] < pencil.d - 1:
            # exposed face is a segment; its other end comes from the smallest
            # compressed derivative
            other = pencil.forms(vecs[:, br.top_start[i]])
            if np.hypot(*(other - top)) > 1e-12:
                pts = [tuple(other), tuple(top)]
        lines.append(SupportLine(float(theta), float(br.lam[i, -1]), tuple(pts)))
    return lines


def support(pencil, theta):
    """Supporting line of the numerical range with outer normal ``(cos, sin)``."""
    return _support_lines(pencil, branches(pencil, [theta]))[0]


def boundary_samples(pencil, n=DEFAULT_GRID):
    """Touch points and support lines on the uniform grid ``2 pi i / n``.

    The touch points generate an inner polygonal approximation of the
    numerical range, the half-planes ``<x, (cos, sin)> <= h`` an outer one.
    """
    if n < 3:
        raise ValueError("grid size must be at least 3")
    return _touch_points(pencil, branches(pencil, theta_grid(n)))


def _touch_points(pencil, br):
    lines = _support_lines(pencil, br)
    pts = np.array([p for line in lines for p in line.touch_points], dtype=float)
    return pts, lines


def kippenhahn_samples(pencil, n=DEFAULT_GRID):
    """Boundary generating curve samples, ``n * d`` of them."""
    if n < 3:
        raise ValueError("grid size must be at least 3")
    br = branches(pencil, theta_grid(n))
    pts = br.points
    out = []
    for i, theta in enumerate(br.theta):
        for j in range(pencil.d):
            out.append(CurveSample(float(theta), j, float(br.lam[i, j]),
                                   float(br.lam_prime[i, j]),
                                   (float(pts[i, j, 0]), float(pts[i, j, 1]))))
    return out


def curve_residuals(pencil, samples):
    """``|det(L(-lambda, cos theta, sin theta))|`` for each curve sample."""
    theta = np.array([s.theta for s in samples])
    lam = np.array([s.lam for s in samples])
    u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return np.abs(det_complex(pencil.evaluate_L(-lam, u)))


def _scale(hull):
    return 1.0 + hull.diameter


def verify_theorem(pencil, n=DEFAULT_GRID, tol=THEOREM_TOL):
    """Compare the convex hull of the curve samples with the hull of the
    boundary touch points; they should coincide up to grid error."""
    if n < 16:
        raise ValueError("grid size must be at least 16")
    br = branches(pencil, theta_grid(n))
    touch, _ = _touch_points(pencil, br)
    inner = convex_hull(touch)
    curve = convex_hull(br.points.reshape(-1, 2))
    dist = hausdorff(inner, curve)
    scale = _scale(inner)
    return TheoremReport(dist, scale, bool(dist <= tol * scale))


def max_halfplane_violation(points, lines, chunk=1024):
    """Largest ``<x, normal> - h`` over all points and support lines."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    normals = np.array([line.normal for line in lines])
    h = np.array([line.h for line in lines])
    worst = -np.inf
    for start in range(0, len(points), chunk):
        proj = points[start:start + chunk] @ normals.T - h[None, :]
        worst = max(worst, float(proj.max()))
    return worst


def verify_curve_in_W(pencil, n=DEFAULT_GRID, tol=CURVE_TOL):
    """Check that every curve sample lies in every support half-plane."""
    if n < 16:
        raise ValueError("grid size must be at least 16")
    br = branches(pencil, theta_grid(n))
    touch, lines = _touch_points(pencil, br)
    worst = max_halfplane_violation(br.points, lines)
    scale = _scale(convex_hull(touch))
    return CurveInRangeReport(worst, scale, bool(worst <= tol * scale))
