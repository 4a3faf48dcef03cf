"""Realification machinery and lifted (rank-one) measurement operators.

A complex vector x in C^n is identified with xi = [real(x); imag(x)] in R^{2n};
multiplication by i corresponds to the orthogonal antisymmetric matrix J.
Each frame vector f contributes a rank-2 PSD form Phi with
<Phi xi, xi> = |<x, f>|^2, which turns the intensity measurement map into
linear algebra on symmetric matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OddDimension
from .frames import Frame
from .linalg import hermitian_eig, hermitian_part


def realify(x) -> np.ndarray:
    """Stack real and imaginary parts: C^n -> R^{2n}; norm preserving."""
    x = np.asarray(x, dtype=complex)
    return np.concatenate([x.real, x.imag])


def complexify(xi) -> np.ndarray:
    """Inverse of realify.  Raises OddDimension on odd-length input."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape[0] % 2 != 0:
        raise OddDimension(f"length {xi.shape[0]} is not even")
    n = xi.shape[0] // 2
    return xi[:n] + 1j * xi[n:]


def complex_structure(n: int) -> np.ndarray:
    """J, the 2n x 2n matrix representing multiplication by i: J^T = -J, J^2 = -I."""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -np.eye(n)
    J[n:, :n] = np.eye(n)
    return J


def apply_complex_structure(xi: np.ndarray) -> np.ndarray:
    """J @ xi without forming J."""
    n = xi.shape[0] // 2
    return np.concatenate([-xi[n:], xi[:n]])


def measurement_form(f) -> np.ndarray:
    """Rank-2 PSD form Phi = phi phi^T + (J phi)(J phi)^T for one frame vector.

    Satisfies <Phi xi, xi> = |<x, f>|^2 and has the single nonzero eigenvalue
    ||f||^2 with multiplicity 2; Phi / ||f||^2 is an orthogonal projection.
    """
    phi = realify(f)
    jphi = apply_complex_structure(phi)
    return np.outer(phi, phi) + np.outer(jphi, jphi)


def measurement_forms(frame: Frame) -> np.ndarray:
    """Stacked forms, shape (m, 2n, 2n)."""
    V = frame.vectors
    phi = np.concatenate([V.real, V.imag], axis=1)
    jphi = np.concatenate([-V.imag, V.real], axis=1)
    return np.einsum("ki,kj->kij", phi, phi) + np.einsum("ki,kj->kij", jphi, jphi)


def sym_outer(x, y) -> np.ndarray:
    """Symmetric outer product (x y* + y x*)/2; sym_outer(x, x) = x x*."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shape mismatch {x.shape} vs {y.shape}")
    return 0.5 * (np.outer(x, y.conj()) + np.outer(y, x.conj()))


@dataclass(frozen=True)
class S11Spectrum:
    """Closed-form spectrum of a difference of two rank-one PSD matrices.

    Such a matrix has at most one positive eigenvalue a_plus and one negative
    eigenvalue a_minus; norm1 = a_plus - a_minus.
    """

    a_plus: float
    a_minus: float
    norm1: float
    norm2: float
    norm_inf: float


def sym_outer_spectrum(u, v) -> S11Spectrum:
    """Eigenvalues and p-norms of sym_outer(u, v) without any eigensolve."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    ip = np.vdot(v, u)  # <u, v> under the first-linear convention
    re, im = ip.real, ip.imag
    nu2 = np.vdot(u, u).real
    nv2 = np.vdot(v, v).real
    disc = np.sqrt(max(nu2 * nv2 - im * im, 0.0))
    a_plus = 0.5 * (re + disc)
    a_minus = 0.5 * (re - disc)
    norm2 = np.sqrt(max(0.5 * (nu2 * nv2 + re * re - im * im), 0.0))
    return S11Spectrum(
        a_plus=float(a_plus),
        a_minus=float(a_minus),
        norm1=float(disc),
        norm2=float(norm2),
        norm_inf=float(0.5 * (abs(re) + disc)),
    )


def rank_one_diff_spectrum(x, y) -> S11Spectrum:
    """Eigenvalues and p-norms of x x* - y y* in closed form."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    nx2 = np.vdot(x, x).real
    ny2 = np.vdot(y, y).real
    ip2 = abs(np.vdot(y, x)) ** 2
    disc = np.sqrt(max((nx2 + ny2) ** 2 - 4.0 * ip2, 0.0))
    a_plus = 0.5 * (nx2 - ny2 + disc)
    a_minus = 0.5 * (nx2 - ny2 - disc)
    norm2 = np.sqrt(max(nx2 * nx2 + ny2 * ny2 - 2.0 * ip2, 0.0))
    return S11Spectrum(
        a_plus=float(a_plus),
        a_minus=float(a_minus),
        norm1=float(disc),
        norm2=float(norm2),
        norm_inf=float(0.5 * (abs(nx2 - ny2) + disc)),
    )


def lifted_map(frame: Frame, X) -> np.ndarray:
    """Measurements of a self-adjoint matrix: k-th entry trace(f_k f_k* X).

    Linear in X; on X = x x* it reproduces the intensity measurements of x.
    """
    X = np.asarray(X, dtype=complex)
    if X.shape != (frame.n, frame.n):
        raise DimensionMismatch(f"expected ({frame.n},{frame.n}) matrix, got {X.shape}")
    V = frame.vectors
    return np.einsum("ki,ij,kj->k", V.conj(), X, V).real


def lifted_map_adjoint(frame: Frame, w) -> np.ndarray:
    """Adjoint of lifted_map: sum_k w_k f_k f_k* (self-adjoint for real w)."""
    w = np.asarray(w, dtype=float)
    if w.shape != (frame.m,):
        raise DimensionMismatch(f"expected length-{frame.m} weights, got {w.shape}")
    V = frame.vectors
    return hermitian_part(np.einsum("k,ki,kj->ij", w, V, V.conj()))


def lifted_map_real(frame: Frame, T) -> np.ndarray:
    """Realified counterpart: k-th entry trace(T Phi_k) for symmetric 2n x 2n T."""
    T = np.asarray(T, dtype=float)
    d = 2 * frame.n
    if T.shape != (d, d):
        raise DimensionMismatch(f"expected ({d},{d}) matrix, got {T.shape}")
    V = frame.vectors
    phi = np.concatenate([V.real, V.imag], axis=1)
    jphi = np.concatenate([-V.imag, V.real], axis=1)
    return np.einsum("ki,ij,kj->k", phi, T, phi) + np.einsum("ki,ij,kj->k", jphi, T, jphi)


def weighted_frame_operator(frame: Frame, x) -> np.ndarray:
    """R(x) = sum_k |<x, f_k>|^2 f_k f_k*; PSD and quadratic in x."""
    c = frame.vectors.conj() @ np.asarray(x, dtype=complex)
    w = (c * c.conj()).real
    return lifted_map_adjoint(frame, w)


def gradient_columns(frame: Frame, xi) -> np.ndarray:
    """Matrix with columns Phi_k xi, shape (2n, m).

    Column k is half the gradient of xi -> <Phi_k xi, xi>, the k-th intensity
    measurement in realified coordinates.
    """
    xi = np.asarray(xi, dtype=float)
    d = 2 * frame.n
    if xi.shape != (d,):
        raise DimensionMismatch(f"expected length-{d} vector, got {xi.shape}")
    V = frame.vectors
    phi = np.concatenate([V.real, V.imag], axis=1)
    jphi = np.concatenate([-V.imag, V.real], axis=1)
    return (phi.T * (phi @ xi)) + (jphi.T * (jphi @ xi))


def gradient_gram(frame: Frame, xi) -> np.ndarray:
    """Gram matrix of the measurement gradients: sum_k Phi_k xi xi^T Phi_k.

    Equal to Z Z^T for Z = gradient_columns(frame, xi); J xi lies in its kernel.
    """
    Z = gradient_columns(frame, xi)
    return Z @ Z.T


def normalized_gradient_gram(frame: Frame, xi, zero_tol: float = 1e-12) -> np.ndarray:
    """Same sum with each term divided by <Phi_k xi, xi>.

    Terms whose quadratic form <Phi_k xi, xi> falls below
    zero_tol * ||f_k||^2 * ||xi||^2 are excluded (Phi_k xi = 0 up to roundoff).
    """
    xi = np.asarray(xi, dtype=float)
    Z = gradient_columns(frame, xi)
    s = Z.T @ xi  # s_k = <Phi_k xi, xi>
    scale = np.linalg.norm(frame.vectors, axis=1) ** 2 * float(xi @ xi)
    keep = s > zero_tol * np.maximum(scale, np.finfo(float).tiny)
    if not np.any(keep):
        return np.zeros((xi.shape[0], xi.shape[0]))
    Zk = Z[:, keep] / np.sqrt(s[keep])
    return Zk @ Zk.T


def rank_one_reduction(A) -> np.ndarray:
    """Continuous map of a self-adjoint matrix onto the rank-<=1 PSD cone.

    Returns (lam1 - lam2) P1 with P1 the principal eigenprojector.  Fixes
    every x x* and vanishes when the top eigenvalue is tied, which keeps the
    map Lipschitz where a plain top-eigenpair truncation would jump.
    """
    dec = hermitian_eig(np.asarray(A))
    lam = dec.eigenvalues
    if lam.shape[0] == 1:
        gap = max(lam[0], 0.0)
    else:
        gap = lam[0] - lam[1]
    if gap <= 0.0:
        return np.zeros_like(np.asarray(A))
    e1 = dec.eigenvectors[:, 0]
    return gap * np.outer(e1, e1.conj())


def lift_outer(x) -> np.ndarray:
    """x x*, the isometric embedding of the phase quotient for the 1-norm."""
    x = np.asarray(x, dtype=complex)
    return np.outer(x, x.conj())


def lift_outer_normalized(x) -> np.ndarray:
    """x x* / ||x|| (0 at x = 0); bi-Lipschitz for the phase-quotient 2-distance."""
    x = np.asarray(x, dtype=complex)
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return np.zeros((x.shape[0], x.shape[0]), dtype=complex)
    return np.outer(x, x.conj()) / nx
