"""Dense complex Hermitian linear algebra.

Everything here operates on plain numpy arrays.  The eigensolver is a cyclic
complex Jacobi method that works on a whole stack of matrices at once, so a
grid of a few thousand small matrices costs a few hundred vectorized updates
rather than a few thousand Python-level solves.
"""

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-14
MAX_SWEEPS = 100


class ConvergenceError(ArithmeticError):
    """Raised when the Jacobi iteration does not converge within the sweep cap."""


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # (..., d) real, ascending
    eigenvectors: np.ndarray  # (..., d, d) complex, column j belongs to eigenvalue j


def as_hermitian(a, tol=HERMITIAN_TOL):
    """Return ``(a + a^*) / 2`` as a complex array, checking that ``a`` is Hermitian.

    The check is relative to the largest absolute entry.  Works on stacks
    of matrices of shape ``(..., d, d)``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or a.shape[-1] < 1:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    asym = float(np.max(np.abs(a - np.swapaxes(a.conj(), -1, -2))))
    if asym > tol * scale:
        raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3g})")
    return 0.5 * (a + np.swapaxes(a.conj(), -1, -2))


def _offdiag_norm(a):
    # summed directly: total minus diagonal cancels down to sqrt(eps)
    off = ~np.eye(a.shape[-1], dtype=bool)
    return np.sqrt(np.sum(np.abs(a[..., off]) ** 2, axis=-1))


def _fix_phases(vecs):
    # largest-magnitude component real positive; argmax picks the lowest index on ties
    idx = np.argmax(np.abs(vecs), axis=-2)
    lead = np.take_along_axis(vecs, idx[..., None, :], axis=-2)
    out = vecs * (np.abs(lead) / lead)
    np.put_along_axis(out, idx[..., None, :], np.abs(lead).astype(complex), axis=-2)
    return out


def eig_hermitian(h, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix or a stack of them.

    Cyclic Jacobi rotations are applied until the off-diagonal Frobenius mass
    of every matrix in the stack drops below ``tol * ||H||_F``.  Eigenvalues
    come back ascending; each eigenvector has its largest-magnitude entry
    real and positive.

    Raises ConvergenceError if ``max_sweeps`` sweeps are not enough.
    """
    a = np.array(h, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    single = a.ndim == 2
    if single:
        a = a[None]
    batch_shape = a.shape[:-2]
    d = a.shape[-1]
    a = a.reshape(-1, d, d)
    v = np.broadcast_to(np.eye(d, dtype=complex), a.shape).copy()

    threshold = tol * np.linalg.norm(a, axis=(-2, -1))
    pairs = [(p, q) for p in range(d - 1) for q in range(p + 1, d)]
    sweeps = 0
    while True:
        active = np.nonzero(_offdiag_norm(a) > threshold)[0]
        if active.size == 0:
            break
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps "
                f"({active.size} of {a.shape[0]} matrices unconverged)")
        sub, vs = a[active], v[active]
        # entries this small are zeroed without a rotation
        negligible = (1e-20 * threshold[active] / JACOBI_TOL)
        for p, q in pairs:
            apq = sub[:, p, q]
            mag = np.abs(apq)
            nz = mag > np.maximum(negligible, np.finfo(float).tiny)
            mag = np.where(nz, mag, 0.0)
            safe = np.where(nz, mag, 1.0)
            phase = np.where(nz, apq / safe, 1.0)
            alpha = sub[:, p, p].real.copy()
            beta = sub[:, q, q].real.copy()
            tau = (beta - alpha) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(nz, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            e = phase.conj()  # e^{-i phi}

            # A <- A U with U = [[c, s], [-s e, c e]] on columns p, q
            colp, colq = sub[:, :, p].copy(), sub[:, :, q]
            sub[:, :, p] = c[:, None] * colp - (s * e)[:, None] * colq
            sub[:, :, q] = s[:, None] * colp + (c * e)[:, None] * colq
            # A <- U^* A on rows p, q
            rowp, rowq = sub[:, p, :].copy(), sub[:, q, :]
            sub[:, p, :] = c[:, None] * rowp - (s * phase)[:, None] * rowq
            sub[:, q, :] = s[:, None] * rowp + (c * phase)[:, None] * rowq
            sub[:, p, q] = 0.0
            sub[:, q, p] = 0.0
            sub[:, p, p] = alpha - t * mag
            sub[:, q, q] = beta + t * mag

            vp, vq = vs[:, :, p].copy(), vs[:, :, q]
            vs[:, :, p] = c[:, None] * vp - (s * e)[:, None] * vq
            vs[:, :, q] = s[:, None] * vp + (c * e)[:, None] * vq
        a[active], v[active] = sub, vs
        sweeps += 1

    w = a[:, np.arange(d), np.arange(d)].real
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    v = _fix_phases(v)

    w = w.reshape(batch_shape + (d,))
    v = v.reshape(batch_shape + (d, d))
    if single:
        return EigenDecomposition(w[0], v[0])
    return EigenDecomposition(w, v)


def eigvals_hermitian(h):
    return eig_hermitian(h).eigenvalues


def det_complex(m):
    """Determinant by Gaussian elimination with partial pivoting.

    Accepts a single square matrix or a stack ``(..., d, d)``.  A singular
    input yields (numerically) zero, never an error.
    """
    a = np.array(m, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    batch_shape = a.shape[:-2]
    d = a.shape[-1]
    a = a.reshape(-1, d, d)
    rows = np.arange(a.shape[0])
    det = np.ones(a.shape[0], dtype=complex)
    for j in range(d):
        piv = j + np.argmax(np.abs(a[:, j:, j]), axis=1)
        swap = piv != j
        if np.any(swap):
            tmp = a[rows, j, :].copy()
            a[rows, j, :] = a[rows, piv, :]
            a[rows, piv, :] = tmp
            det = np.where(swap, -det, det)
        pivot = a[:, j, j]
        det = det * pivot
        ok = pivot != 0
        if j + 1 < d:
            factors = np.where(ok[:, None], a[:, j + 1:, j] / np.where(ok, pivot, 1.0)[:, None], 0.0)
            a[:, j + 1:, j:] -= factors[:, :, None] * a[:, None, j, j:]
    det = det.reshape(batch_shape)
    return det[()] if det.ndim == 0 else det


def char_poly(h):
    """Coefficients ``c`` of ``det(x I - H) = sum_j c_j x^(d-j)``, with ``c_0 = 1``.

    Faddeev-LeVerrier trace recursion.  For Hermitian input the coefficients
    are real, so the real parts are returned.
    """
    h = np.asarray(h, dtype=complex)
    d = h.shape[0]
    coeffs = np.zeros(d + 1)
    coeffs[0] = 1.0
    eye = np.eye(d, dtype=complex)
    m = np.zeros_like(h)
    c_prev = 1.0 + 0j
    for k in range(1, d + 1):
        m = h @ m + c_prev * eye
        c_prev = -np.trace(h @ m) / k
        coeffs[k] = c_prev.real
    return coeffs


def random_hermitian(d, rng, scale=1.0):
    """Random Hermitian matrix from the Gaussian unitary ensemble, scaled."""
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * 0.5 * (z + z.conj().T)


def random_unitary(d, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))
