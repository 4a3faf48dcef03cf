"""Dense self-adjoint linear algebra primitives shared by every other module.

All routines are pure functions of their inputs and deterministic; eigenvalues
are always reported in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import IndefiniteOperator, NoConvergence, NotHermitian

DEFAULT_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class EigDecomposition:
    """Full spectrum of a self-adjoint matrix.

    ``eigenvalues`` is real and sorted descending; column ``k`` of
    ``eigenvectors`` is the unit eigenvector paired with ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Return E diag(lam) E*."""
        e, v = self.eigenvalues, self.eigenvectors
        return (v * e) @ v.conj().T


def hermitian_part(M: np.ndarray) -> np.ndarray:
    """(M + M*)/2, absorbing roundoff asymmetry."""
    M = np.asarray(M)
    return 0.5 * (M + M.conj().T)


def check_hermitian(M: np.ndarray, tol: float = DEFAULT_TOL) -> None:
    """Raise NotHermitian when ||M - M*|| exceeds tol * ||M|| (Frobenius)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {M.shape}")
    scale = np.linalg.norm(M)
    if np.linalg.norm(M - M.conj().T) > tol * max(scale, 1.0):
        raise NotHermitian("matrix is not self-adjoint within tolerance")


def hermitian_eig(M: np.ndarray, tol: float = DEFAULT_TOL) -> EigDecomposition:
    """Full eigendecomposition of a self-adjoint matrix, sorted descending.

    The input is symmetrized before factorization so that roundoff-level
    asymmetry never leaks into the spectrum.
    """
    M = np.asarray(M)
    check_hermitian(M, tol)
    try:
        w, v = np.linalg.eigh(hermitian_part(M))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(w)[::-1]
    return EigDecomposition(np.ascontiguousarray(w[order]), np.ascontiguousarray(v[:, order]))


def pseudo_inverse(M: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a self-adjoint matrix via its spectrum.

    Eigenvalues with |lam| <= rank_tol * max|lam| are treated as zero.
    """
    dec = hermitian_eig(M)
    lam = dec.eigenvalues
    cutoff = rank_tol * np.max(np.abs(lam)) if lam.size else 0.0
    inv = np.where(np.abs(lam) > cutoff, 1.0 / np.where(lam == 0, 1.0, lam), 0.0)
    out = (dec.eigenvectors * inv) @ dec.eigenvectors.conj().T
    return hermitian_part(out)


def cg_solve(
    apply_A: Callable[[np.ndarray], np.ndarray],
    b: np.ndarray,
    tol: float = 1e-12,
    max_iter: Optional[int] = None,
    x0: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, bool, int]:
    """Conjugate gradients for a self-adjoint PSD operator given as a callback.

    Returns ``(x, converged, iterations)`` where ``converged`` reports whether
    ``||A x - b|| <= tol * ||b||`` was reached within the budget.  A direction
    of strictly negative curvature raises IndefiniteOperator.
    """
    b = np.asarray(b, dtype=float if not np.iscomplexobj(b) else complex)
    n = b.shape[0]
    if max_iter is None:
        max_iter = 10 * n
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=b.dtype)
    r = b - apply_A(x)
    bnorm = np.linalg.norm(b)
    target = tol * max(bnorm, np.finfo(float).tiny)
    if np.linalg.norm(r) <= target:
        return x, True, 0
    p = r.copy()
    rs = np.vdot(r, r).real
    for it in range(1, max_iter + 1):
        Ap = apply_A(p)
        curv = np.vdot(p, Ap).real
        if curv < -1e-14 * np.vdot(p, p).real:
            raise IndefiniteOperator("negative curvature direction encountered")
        if curv <= 0.0:
            # numerically flat direction; cannot make further progress
            return x, np.linalg.norm(b - apply_A(x)) <= target, it
        alpha = rs / curv
        x = x + alpha * p
        r = r - alpha * Ap
        rs_new = np.vdot(r, r).real
        if np.sqrt(rs_new) <= target:
            return x, True, it
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x, np.linalg.norm(b - apply_A(x)) <= target, max_iter


def power_method(
    M: np.ndarray,
    seed: int = 0,
    tol: float = 1e-12,
    max_iter: int = 5000,
) -> tuple[float, np.ndarray, bool]:
    """Principal eigenpair of a self-adjoint PSD matrix by power iteration.

    Returns ``(lam1, e1, converged)``.  ``converged`` is False when the
    eigenvalue gap is too small for the iteration to settle within budget
    (the last iterate is still returned).  Deterministic given ``seed``.
    """
    M = np.asarray(M)
    check_hermitian(M, max(tol, DEFAULT_TOL))
    n = M.shape[0]
    rng = np.random.Generator(np.random.Philox(seed))
    v = rng.normal(size=n)
    if np.iscomplexobj(M):
        v = v + 1j * rng.normal(size=n)
    v = v / np.linalg.norm(v)
    lam = 0.0
    scale = max(np.linalg.norm(M, ord=np.inf), np.finfo(float).tiny)
    for _ in range(max_iter):
        w = M @ v
        norm_w = np.linalg.norm(w)
        if norm_w <= tol * scale:
            # M annihilates the iterate; any unit vector is optimal for a PSD
            # matrix that is numerically zero on this subspace
            return 0.0, v, True
        v_new = w / norm_w
        lam = float(np.vdot(v_new, M @ v_new).real)
        if np.linalg.norm(M @ v_new - lam * v_new) <= tol * scale:
            return lam, v_new, True
        v = v_new
    return lam, v, False
