"""Hermitian tuples and the linear matrix pencil built from them."""

import numpy as np

from .linalg import HERMITIAN_TOL, as_hermitian, random_hermitian

UNIT_TOL = 1e-12


class Pencil:
    """A tuple ``(F_1, ..., F_k)`` of Hermitian ``d x d`` matrices.

    The identity plays the role of ``F_0`` in ``L(u) = u0*I + u1*F_1 + ... + uk*F_k``.
    Matrices are symmetrized on construction.
    """

    def __init__(self, matrices, tol=HERMITIAN_TOL):
        mats = [np.asarray(m) for m in matrices]
        if not mats:
            raise ValueError("a pencil needs at least one matrix")
        shapes = {m.shape for m in mats}
        if len(shapes) != 1:
            raise ValueError(f"matrices have different shapes: {sorted(shapes)}")
        self.F = np.stack([as_hermitian(m, tol) for m in mats])
        self.F.setflags(write=False)

    @property
    def k(self):
        return self.F.shape[0]

    @property
    def d(self):
        return self.F.shape[1]

    @property
    def norm(self):
        """Frobenius norm of the stacked tuple, ``sqrt(sum_i ||F_i||_F^2)``."""
        return float(np.sqrt(np.sum(np.abs(self.F) ** 2)))

    def __repr__(self):
        return f"Pencil(k={self.k}, d={self.d})"

    def _combine(self, coeffs):
        # coeffs (..., k) real -> (..., d, d)
        return np.tensordot(np.asarray(coeffs, dtype=float), self.F, axes=([-1], [0]))

    def evaluate_L(self, u0, u):
        """``u0*I + sum_i u_i F_i``.  ``u0`` and ``u`` may carry matching batch axes."""
        u = np.asarray(u, dtype=float)
        if u.shape[-1:] != (self.k,):
            raise ValueError(f"expected {self.k} coefficients, got shape {u.shape}")
        u0 = np.asarray(u0, dtype=float)
        return u0[..., None, None] * np.eye(self.d) + self._combine(u)

    def _require_planar(self):
        if self.k != 2:
            raise ValueError(f"operation needs k = 2 matrices, pencil has k = {self.k}")

    def aggregate_A(self, theta):
        """``cos(theta) F_1 + sin(theta) F_2``, vectorized over ``theta``."""
        self._require_planar()
        theta = np.asarray(theta, dtype=float)
        return self._combine(np.stack([np.cos(theta), np.sin(theta)], axis=-1))

    def aggregate_A_prime(self, theta):
        """Angular derivative of :meth:`aggregate_A`: ``-sin(theta) F_1 + cos(theta) F_2``."""
        self._require_planar()
        theta = np.asarray(theta, dtype=float)
        return self._combine(np.stack([-np.sin(theta), np.cos(theta)], axis=-1))

    def direction_matrix(self, u, check_unit=True):
        """``sum_i u_i F_i`` for a unit direction ``u`` (or a stack of them)."""
        u = np.asarray(u, dtype=float)
        if u.shape[-1:] != (self.k,):
            raise ValueError(f"expected {self.k} coefficients, got shape {u.shape}")
        if check_unit and np.any(np.abs(np.linalg.norm(u, axis=-1) - 1.0) > UNIT_TOL):
            raise ValueError("direction must be a unit vector")
        return self._combine(u)

    def forms(self, psi):
        """Quadratic forms ``(<psi|F_1 psi>, ..., <psi|F_k psi>)``.

        ``psi`` has shape ``(..., d)``; no normalization check here.
        """
        psi = np.asarray(psi, dtype=complex)
        fpsi = np.einsum("kij,...j->...ki", self.F, psi)
        return np.einsum("...i,...ki->...k", psi.conj(), fpsi).real


def check_unit(psi, tol=UNIT_TOL):
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError("state vector must have unit norm")
    return psi


def random_pencil(k, d, rng, scale=1.0):
    return Pencil([random_hermitian(d, rng, scale) for _ in range(k)])


def roman_pencil():
    """The three 3x3 real symmetric matrices whose boundary generating
    surface is the Roman surface."""
    mats = []
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        m = np.zeros((3, 3))
        m[i, j] = m[j, i] = 0.5
        mats.append(m)
    return Pencil(mats)


def roman_quartic(x):
    """``x1 x2 x3 - x1^2 x2^2 - x1^2 x3^2 - x2^2 x3^2`` along the last axis."""
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return x1 * x2 * x3 - (x1 * x2) ** 2 - (x1 * x3) ** 2 - (x2 * x3) ** 2
