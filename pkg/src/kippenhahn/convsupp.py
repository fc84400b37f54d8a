"""Convex support, joint numerical range and spectrahedron for any k.

The convex support ``W`` of ``(F_1, ..., F_k)`` is the image of the density
matrices under ``rho -> (tr F_1 rho, ..., tr F_k rho)``.  Its support
function in direction ``u`` is the top eigenvalue of ``u.F``.  The
spectrahedron ``S = {u : I + u.F >= 0}`` is its convex dual
``W* = {u : 1 + <u, x> >= 0 for all x in W}``.

Only the eigenvector-swept part of the boundary generating hypersurface is
sampled: each unit direction ``u`` and each eigenvector ``psi`` of ``u.F``
give the point ``(<psi|F_i psi>)_i``, which lies on the tangent hyperplane
``<u, x> = lambda``.  Components of the real dual variety that do not arise
this way, such as the coordinate axes on the Roman surface, are never
produced.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import det_complex, eig_hermitian
from .numrange import CLUSTER_TOL, clusters
from .pencil import check_unit

MEMBER_TOL = 1e-10
DUALITY_TOL = 1e-9
DEFAULT_DIRECTIONS = 2000
BISECTION_STEPS = 30
UNBOUNDED_SCALE = 1e6


@dataclass(frozen=True)
class SurfaceSample:
    direction: tuple
    branch: int
    lam: float
    point: tuple
    in_cluster: bool = False


class Membership(NamedTuple):
    inside: bool
    margin: float


@dataclass(frozen=True)
class DualityReport:
    trials: int
    agreements: int
    max_gap: float

    @property
    def passed(self):
        return self.agreements == self.trials


def jnr_sample(pencil, psi):
    """Joint numerical range point ``(<psi|F_1 psi>, ..., <psi|F_k psi>)``."""
    return pencil.forms(check_unit(psi))


def surface_samples(pencil, directions):
    """All eigen-branch samples for a batch of unit directions ``(m, k)``.

    Ordered by direction index, then branch.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    lam, vecs = eig_hermitian(pencil.direction_matrix(dirs))
    pts = pencil.forms(np.swapaxes(vecs, -1, -2))  # (m, d, k)
    gap = CLUSTER_TOL * (1.0 + np.max(np.abs(lam), axis=1, keepdims=True))
    close = np.diff(lam, axis=1) < gap
    flagged = np.zeros(lam.shape, dtype=bool)
    for i in np.nonzero(close.any(axis=1))[0]:
        for start, stop in clusters(lam[i]):
            if stop - start > 1:
                flagged[i, start:stop] = True
    out = []
    for i, u in enumerate(dirs):
        u_t = tuple(float(c) for c in u)
        for j in range(pencil.d):
            out.append(SurfaceSample(u_t, j, float(lam[i, j]),
                                     tuple(float(c) for c in pts[i, j]),
                                     bool(flagged[i, j])))
    return out


def surface_branches(pencil, u):
    """One sample per eigen-branch of ``u.F``.

    Inside a degenerate cluster the eigenbasis is arbitrary; those samples
    carry ``in_cluster=True``.
    """
    return surface_samples(pencil, [u])


def support_point(pencil, u):
    """Top-branch sample: an exposed point of ``W`` with outer normal ``u``."""
    return surface_branches(pencil, u)[-1]


def surface_residuals(pencil, samples):
    """``|det(L(-lambda, u))|`` for each sample."""
    u = np.array([s.direction for s in samples])
    lam = np.array([s.lam for s in samples])
    return np.abs(det_complex(pencil.evaluate_L(-lam, u)))


def spectrahedron_member(pencil, u, tol=MEMBER_TOL):
    """Membership of ``u`` in ``{u : I + u.F is positive semidefinite}``."""
    lam = eig_hermitian(pencil.evaluate_L(1.0, u)).eigenvalues
    margin = float(lam[0])
    return Membership(margin >= -tol, margin)


def dual_member(pencil, u, tol=MEMBER_TOL):
    """Membership of ``u`` in the convex dual of ``W``.

    ``min over x in W of 1 + <u, x>`` equals ``1 + lambda_min(u.F)``.
    """
    lam = eig_hermitian(pencil.direction_matrix(u, check_unit=False)).eigenvalues
    margin = 1.0 + float(lam[0])
    return Membership(margin >= -tol, margin)


def _margins(pencil, us):
    # smallest eigenvalue of I + u.F for a batch of u
    return eig_hermitian(pencil.evaluate_L(np.ones(len(us)), us)).eigenvalues[:, 0]


def spectrahedron_radius(pencil, v, steps=BISECTION_STEPS, limit=UNBOUNDED_SCALE):
    """Largest ``t`` with ``t * v`` in the spectrahedron, by bisection.

    ``v`` is one direction or a batch ``(m, k)``.  The boundary is bracketed
    by doubling from 1, then bisected; the inner end of the final bracket is
    returned.  Rays still inside at scale ``limit`` return ``limit``.
    """
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    v = np.atleast_2d(v)
    m = len(v)

    def inside(t, idx):
        return _margins(pencil, t[:, None] * v[idx]) >= 0.0

    hi = np.ones(m)
    grow = np.arange(m)
    while grow.size:
        still = inside(hi[grow], grow)
        grow = grow[still]
        hi[grow] *= 2.0
        grow = grow[hi[grow] <= limit]
    unbounded = hi > limit
    lo = np.where(hi == 1.0, 0.0, hi / 2.0)
    idx = np.nonzero(~unbounded)[0]
    if idx.size:
        for _ in range(steps):
            mid = 0.5 * (lo[idx] + hi[idx])
            ok = inside(mid, idx)
            lo[idx] = np.where(ok, mid, lo[idx])
            hi[idx] = np.where(ok, hi[idx], mid)
    lo[unbounded] = limit
    return lo[0] if single else lo


def random_directions(k, m, rng):
    g = rng.normal(size=(m, k))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def fibonacci_sphere(m):
    """``m`` nearly uniform unit vectors in R^3."""
    i = np.arange(m) + 0.5
    z = 1.0 - 2.0 * i / m
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.pi * (1.0 + np.sqrt(5.0)) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def direction_grid(k, m, rng=None):
    """Direction set used for surface sampling.

    k = 1: the two unit "directions" +1 and -1.  k = 2: the uniform angle
    grid.  k = 3: a Fibonacci sphere for four fifths of the points, seeded
    uniform random directions for the rest.  k >= 4: seeded uniform random.
    """
    if k == 1:
        return np.array([[1.0], [-1.0]])
    if k == 2:
        theta = 2.0 * np.pi * np.arange(m) / m
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    if rng is None:
        rng = np.random.default_rng(0)
    if k == 3:
        n_random = m // 5
        return np.vstack([fibonacci_sphere(m - n_random), random_directions(3, n_random, rng)])
    return random_directions(k, m, rng)


def _random_states(d, m, rng):
    z = rng.normal(size=(m, d)) + 1j * rng.normal(size=(m, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def duality_check(pencil, trials, seed=0, tol=DUALITY_TOL):
    """Certify ``S`` inside ``W*`` and ``conv(0, W)`` inside ``S*`` on random pairs.

    Each trial draws ``u`` from the spectrahedron (bisected boundary scale
    times a random factor, an unbounded ray capped at 1e6) and ``x`` from
    ``W`` (an exposed point or a joint numerical range point), and checks
    ``1 + <u, x> >= -tol`` as well as ``1 + <u, s x> >= -tol`` for a random
    ``s`` in [0, 1].  A trial also checks the reverse inclusion: a point just
    beyond the boundary along the same ray must be separated from ``W`` by the
    exposed point in direction ``-u``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    k, d = pencil.k, pencil.d
    dirs = random_directions(k, trials, rng)
    radii = spectrahedron_radius(pencil, dirs)
    s = rng.uniform(size=trials)
    s[rng.uniform(size=trials) < 0.25] = 1.0
    us = (s * radii)[:, None] * dirs

    # half exposed points, half pure-state images
    xdirs = random_directions(k, trials, rng)
    exposed = np.array([p.point for p in surface_samples(pencil, xdirs)]).reshape(trials, d, k)[:, -1]
    pure = pencil.forms(_random_states(d, trials, rng))
    use_exposed = rng.uniform(size=trials) < 0.5
    xs = np.where(use_exposed[:, None], exposed, pure)
    shrink = rng.uniform(size=trials)[:, None]

    vals = np.minimum(1.0 + np.sum(us * xs, axis=1), 1.0 + np.sum(us * shrink * xs, axis=1))
    ok = vals >= -tol
    gap = np.maximum(0.0, -vals)

    # separation witnesses for points 1% beyond a bounded boundary
    bounded = radii < UNBOUNDED_SCALE
    if np.any(bounded):
        outer = 1.01 * radii[bounded, None] * dirs[bounded]
        witness = np.array([p.point for p in surface_samples(pencil, -dirs[bounded])])
        witness = witness.reshape(-1, d, k)[:, -1]
        sep = 1.0 + np.sum(outer * witness, axis=1)
        expected = _margins(pencil, outer)
        ok[bounded] &= (sep < 0.0) & (np.abs(sep - expected) <= tol * (1.0 + np.abs(expected)))
    return DualityReport(trials, int(np.sum(ok)), float(np.max(gap)))
