"""Lanczos propagation of exp(-i t H) psi for Hermitian H.

Subspace size adapts until the standard a-posteriori estimate (weight of the
last Krylov component fed back through the small exponential) drops below the
target, restarting with time-step splitting when the basis saturates.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

DEFAULT_TOL = 1e-10
MAX_KRYLOV = 90


def expm_multiply_hermitian(matvec, psi: np.ndarray, t: float,
                            tol: float = DEFAULT_TOL,
                            max_krylov: int = MAX_KRYLOV) -> np.ndarray:
    """Apply exp(-i t H) to psi, H Hermitian given as a matvec callable."""
    if t == 0.0:
        return psi.astype(complex, copy=True)
    norm0 = np.linalg.norm(psi)
    if norm0 == 0.0:
        return psi.astype(complex, copy=True)
    out = _lanczos_step(matvec, psi.astype(complex) / norm0, t, tol, max_krylov)
    return norm0 * out


def _lanczos_step(matvec, v0, t, tol, max_krylov, depth=0):
    if depth > 24:
        raise RuntimeError("Krylov propagation failed to converge (step splitting exhausted)")
    n = v0.shape[0]
    m_cap = int(min(max_krylov, n))
    V = np.empty((m_cap, n), dtype=complex)
    alpha = np.empty(m_cap)
    beta = np.empty(max(m_cap - 1, 1))
    V[0] = v0
    w = matvec(v0)
    alpha[0] = np.real(np.vdot(V[0], w))
    w = w - alpha[0] * V[0]
    m = 1
    converged = n <= 1
    while m < m_cap:
        # full reorthogonalization keeps long evolutions at 1e-10 accuracy
        w -= (V[:m].conj() @ w) @ V[:m]
        b = np.linalg.norm(w)
        if b < 1e-14:
            converged = True  # invariant subspace: small exponential is exact
            break
        beta[m - 1] = b
        V[m] = w / b
        w = matvec(V[m])
        alpha[m] = np.real(np.vdot(V[m], w))
        w = w - alpha[m] * V[m] - b * V[m - 1]
        m += 1
        if m >= 8 and (m % 4 == 0 or m == m_cap):
            if _error_estimate(alpha[:m], beta[:m - 1], t) < tol:
                converged = True
                break
    if not converged:
        half = _lanczos_step(matvec, v0, t / 2, tol / 2, max_krylov, depth + 1)
        half = half / np.linalg.norm(half)
        return _lanczos_step(matvec, half, t / 2, tol / 2, max_krylov, depth + 1)
    coeff = _expm_tridiag_e1(alpha[:m], beta[:m - 1], t)
    return coeff @ V[:m]


def _expm_tridiag_e1(alpha, beta, t):
    """First column of exp(-i t T) for the tridiagonal Lanczos matrix T."""
    if len(alpha) == 1:
        return np.array([np.exp(-1j * t * alpha[0])])
    evals, evecs = sla.eigh_tridiagonal(alpha, beta)
    return (evecs * np.exp(-1j * t * evals)) @ evecs[0].conj()


def _error_estimate(alpha, beta, t):
    return abs(_expm_tridiag_e1(alpha, beta, t)[-1])
