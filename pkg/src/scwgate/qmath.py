"""Dense complex matrix kernel: Kronecker products, a cyclic-Jacobi Hermitian
eigensolver, and the exact propagator built on top of it.

Everything here operates on plain ``numpy`` complex matrices and is pure:
inputs are never mutated. Matrix dimensions in this project stay tiny
(<= a few tens), so the Jacobi solver favours robustness over speed.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "NotHermitianError",
    "NoConvergenceError",
    "kron",
    "hermitian_eigs",
    "matexp_action",
]

HERMITICITY_TOL = 1e-10   # max entrywise |h - h^dag| accepted
OFFDIAG_TARGET = 1e-12    # Jacobi stops when max off-diagonal falls below this
MAX_SWEEPS = 100


class NotHermitianError(ValueError):
    """Input matrix is not Hermitian within HERMITICITY_TOL."""


class NoConvergenceError(RuntimeError):
    """Jacobi sweeps failed to push the off-diagonal below OFFDIAG_TARGET."""


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product with the block convention
    (a kron b)[i*rB+k, j*cB+l] = a[i,j]*b[k,l]."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def _check_square_hermitian(h: np.ndarray) -> None:
    if h.shape[0] != h.shape[1]:
        raise NotHermitianError(f"matrix is {h.shape[0]}x{h.shape[1]}, not square")
    residue = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if residue > HERMITICITY_TOL:
        raise NotHermitianError(f"Hermiticity residue {residue:.3e} > {HERMITICITY_TOL:.0e}")


def _max_offdiag(a: np.ndarray) -> float:
    n = a.shape[0]
    if n < 2:
        return 0.0
    mask = ~np.eye(n, dtype=bool)
    return float(np.max(np.abs(a[mask])))


def hermitian_eigs(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending (ties keep original
    diagonal order) and orthonormal eigenvector columns ``v`` satisfying
    ``h @ v = v @ diag(w)``.

    Raises NotHermitianError for non-square or non-Hermitian input and
    NoConvergenceError if the off-diagonal cannot be driven below
    OFFDIAG_TARGET within MAX_SWEEPS sweeps.
    """
    h = _as_matrix(h)
    _check_square_hermitian(h)
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v

    converged = False
    for _ in range(MAX_SWEEPS):
        if _max_offdiag(a) < OFFDIAG_TARGET:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < OFFDIAG_TARGET * 1e-3:
                    continue
                # Unitary plane rotation zeroing a[p,q]: phase e absorbs the
                # complex argument, theta is the classic symmetric-Jacobi angle.
                e = apq / abs(apq)
                theta = 0.5 * np.arctan2(2.0 * abs(apq), a[p, p].real - a[q, q].real)
                c, s = np.cos(theta), np.sin(theta)

                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap + s * np.conj(e) * aq
                a[:, q] = -s * e * ap + c * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp + s * e * rq
                a[q, :] = -s * np.conj(e) * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp + s * np.conj(e) * vq
                v[:, q] = -s * e * vp + c * vq
    else:
        converged = _max_offdiag(a) < OFFDIAG_TARGET
    if not converged:
        raise NoConvergenceError(
            f"off-diagonal {_max_offdiag(a):.3e} after {MAX_SWEEPS} sweeps"
        )

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def matexp_action(h, t: float, psi) -> np.ndarray:
    """Apply the exact propagator exp(-i*h*t) to a state vector.

    ``h`` must be Hermitian (in rad/us with hbar = 1); the result is computed
    through the spectral decomposition, so the norm is preserved to solver
    precision.
    """
    w, v = hermitian_eigs(h)
    psi = np.asarray(psi, dtype=complex)
    return v @ (np.exp(-1j * w * t) * (v.conj().T @ psi))
