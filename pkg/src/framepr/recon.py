"""Reconstruction of x (up to global phase) from intensity measurements.

Five solvers: exact linear inversion on the lifted matrix space, a
trace-regularized PSD least-squares relaxation (PhaseLift-style, solved by
proximal gradient with continuation), Gerchberg-Saxton alternating
projections, Wirtinger-flow gradient descent, and iterated regularized least
squares on a bilinear criterion.  All are deterministic given their options
and seeds; estimates are defined up to a global phase, so errors are reported
with the phase-quotient metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InsufficientRedundancy
from .frames import Frame, MeasurementVector, analysis, canonical_dual, synthesis
from .lifting import (
    gradient_columns,
    lifted_map,
    lifted_map_adjoint,
    realify,
    complexify,
)
from .linalg import cg_solve, hermitian_eig, hermitian_part, power_method, pseudo_inverse
from .metrics import outer_distance, quotient_distance

_TIE_TOL = 1e-12


def _values(y) -> np.ndarray:
    if isinstance(y, MeasurementVector):
        return np.asarray(y.values, dtype=float)
    return np.asarray(y, dtype=float)


@dataclass
class ReconResult:
    """Estimate plus convergence diagnostics.

    ``residual`` is ||A(X_hat) - y||_2 for lifted solvers and
    ||intensity(x_hat) - y||_2 for vector solvers.  ``d2_error``/``d1_error``
    are phase-quotient errors against the ground truth when it was supplied.
    """

    x_hat: np.ndarray
    X_hat: Optional[np.ndarray] = None
    iterations: int = 0
    residual: float = np.nan
    converged: bool = False
    trace: Optional[list] = None
    d2_error: Optional[float] = None
    d1_error: Optional[float] = None
    flags: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        x = np.asarray(self.x_hat, dtype=complex)
        return {
            "x_hat": [[float(z.real), float(z.imag)] for z in x],
            "iterations": int(self.iterations),
            "residual": float(self.residual),
            "converged": bool(self.converged),
            "trace": None if self.trace is None else [float(t) for t in self.trace],
            "d2_error": self.d2_error,
            "d1_error": self.d1_error,
            "flags": list(self.flags),
        }


def _vector_residual(frame: Frame, x, y) -> float:
    c = frame.vectors.conj() @ np.asarray(x, dtype=complex)
    return float(np.linalg.norm((c * c.conj()).real - y))


def _attach_errors(result: ReconResult, x_true) -> ReconResult:
    if x_true is not None:
        result.d2_error = quotient_distance(result.x_hat, x_true, 2)
        result.d1_error = outer_distance(result.x_hat, x_true, 1)
    return result


# ---------------------------------------------------------------------------
# lifted linear inversion
# ---------------------------------------------------------------------------

def lifted_linear(frame: Frame, y, rank_tol: float = 1e-10, x_true=None) -> ReconResult:
    """Invert the measurements linearly on the space of self-adjoint matrices.

    Requires the rank-one forms f_k f_k* to span that space (m >= n^2 and full
    Gram rank); the minimum-Frobenius-norm matrix estimate is assembled from
    the dual forms, and two vector estimates are read off its top eigenpair:
    the least-squares scale sqrt(lambda1) and the gap scale
    sqrt(lambda1 - lambda2).  The gap-scaled estimate varies Lipschitz-
    continuously with y and is returned as ``x_hat``.
    """
    y = _values(y)
    V = frame.vectors
    G = np.abs(V.conj() @ V.T) ** 2  # Gram of the rank-one forms
    lam_G = np.linalg.eigvalsh(G)
    rank = int(np.sum(lam_G > rank_tol * max(lam_G[-1], np.finfo(float).tiny)))
    if rank < frame.n**2:
        raise InsufficientRedundancy(
            f"rank-one forms span {rank} < n^2 = {frame.n ** 2} dimensions"
        )
    weights = pseudo_inverse(G, rank_tol) @ y
    X = lifted_map_adjoint(frame, weights)
    dec = hermitian_eig(X)
    lam = dec.eigenvalues
    lam1 = float(lam[0])
    lam2 = float(lam[1]) if lam.shape[0] > 1 else 0.0
    e1 = dec.eigenvectors[:, 0]
    x_ls = np.sqrt(max(lam1, 0.0)) * e1
    flags = []
    gap = lam1 - lam2
    if gap <= _TIE_TOL * max(abs(lam1), 1.0):
        x_lip = np.zeros(frame.n, dtype=complex)
        flags.append("tie_top_eigenvalue")
    else:
        x_lip = np.sqrt(gap) * e1
    result = ReconResult(
        x_hat=x_lip,
        X_hat=X,
        iterations=1,
        residual=float(np.linalg.norm(lifted_map(frame, X) - y)),
        converged=True,
        flags=flags,
        diagnostics={"x_ls": x_ls, "x_lip": x_lip, "lambda1": lam1, "lambda2": lam2},
    )
    return _attach_errors(result, x_true)


# ---------------------------------------------------------------------------
# trace-regularized PSD least squares (PhaseLift relaxation)
# ---------------------------------------------------------------------------

@dataclass
class PhaseLiftOptions:
    lambda0: Optional[float] = None  # auto: 0.1 ||y||_2
    lambda_decay: float = 0.3
    lambda_min: float = 0.0
    fit: str = "l2"  # "l2" | "l1_reweighted"
    max_outer: int = 25
    inner_max: int = 400
    tol: float = 1e-10
    l1_delta: float = 1e-6

    def __post_init__(self):
        if not (0.0 < self.lambda_decay < 1.0):
            raise ValueError("lambda_decay must lie in (0, 1)")
        if self.max_outer < 1 or self.inner_max < 1:
            raise ValueError("iteration budgets must be positive")
        if self.tol <= 0 or self.l1_delta <= 0 or self.lambda_min < 0:
            raise ValueError("tolerances must be positive")
        if self.fit not in ("l2", "l1_reweighted"):
            raise ValueError(f"unknown fit mode {self.fit!r}")


def _psd_trace_prox(Z: np.ndarray, shrink: float) -> np.ndarray:
    dec = hermitian_eig(Z)
    lam = np.maximum(dec.eigenvalues - shrink, 0.0)
    return (dec.eigenvectors * lam) @ dec.eigenvectors.conj().T


def phaselift(frame: Frame, y, opts: PhaseLiftOptions | None = None, x_true=None) -> ReconResult:
    """Trace-regularized PSD recovery of the lifted matrix by proximal gradient.

    Solves min_{X >= 0} sum_k w_k (A(X) - y)_k^2 + lambda trace(X) with FISTA
    steps (gradient of the smooth part, then eigenvalue shrink-and-clip), and
    geometric continuation of lambda down to ``lambda_min`` (a final stage at
    lambda_min itself).  fit "l1_reweighted" re-derives the weights from the
    residuals between stages, approximating an l1 data fit.  The vector
    estimate is the principal eigenvector scaled by the square root of the
    principal eigenvalue.
    """
    opts = opts or PhaseLiftOptions()
    y = _values(y)
    n, m = frame.n, frame.m
    V = frame.vectors
    G = np.abs(V.conj() @ V.T) ** 2
    lam0 = opts.lambda0 if opts.lambda0 is not None else 0.1 * float(np.linalg.norm(y))
    w = np.ones(m)
    X = np.zeros((n, n), dtype=complex)
    lam_reg = lam0
    trace_log: list[float] = []
    iterations = 0
    converged = False
    if np.linalg.norm(y) == 0.0 and lam0 == 0.0:
        lam_reg = 1.0  # pure feasibility at y = 0; any positive shrink gives X = 0
    for outer in range(opts.max_outer):
        if opts.fit == "l1_reweighted" and outer > 0:
            r = lifted_map(frame, X) - y
            w = 1.0 / np.maximum(np.abs(r), opts.l1_delta)
        L = 2.0 * float(np.linalg.eigvalsh(G * np.sqrt(np.outer(w, w)))[-1])
        L = max(L, np.finfo(float).tiny)
        Y = X
        t_m = 1.0
        X_prev = X
        for inner in range(opts.inner_max):
            r = lifted_map(frame, Y) - y
            grad = 2.0 * lifted_map_adjoint(frame, w * r)
            X_new = _psd_trace_prox(Y - grad / L, lam_reg / L)
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_m * t_m))
            Y = X_new + ((t_m - 1.0) / t_new) * (X_new - X_prev)
            step = float(np.linalg.norm(X_new - X_prev))
            X_prev, X, t_m = X_new, X_new, t_new
            iterations += 1
            if step <= opts.tol * max(1.0, float(np.linalg.norm(X_new))):
                break
        trace_log.append(float(np.linalg.norm(lifted_map(frame, X) - y)))
        if lam_reg <= opts.lambda_min:
            converged = inner < opts.inner_max - 1
            break
        lam_reg = max(lam_reg * opts.lambda_decay, opts.lambda_min)
        if lam_reg < 1e-13 * max(lam0, 1.0):
            lam_reg = opts.lambda_min
    dec = hermitian_eig(X)
    lam1 = float(dec.eigenvalues[0])
    e1 = dec.eigenvectors[:, 0]
    x_hat = np.sqrt(max(lam1, 0.0)) * e1
    rank_one_gap = float(np.linalg.norm(X - np.outer(x_hat, x_hat.conj())))
    result = ReconResult(
        x_hat=x_hat,
        X_hat=X,
        iterations=iterations,
        residual=float(np.linalg.norm(lifted_map(frame, X) - y)),
        converged=converged,
        trace=trace_log,
        diagnostics={"rank_one_gap": rank_one_gap, "lambda_final": lam_reg},
    )
    return _attach_errors(result, x_true)


# ---------------------------------------------------------------------------
# Gerchberg-Saxton alternating projections
# ---------------------------------------------------------------------------

@dataclass
class GSOptions:
    max_iter: int = 500
    tol: float = 1e-12

    def __post_init__(self):
        if self.max_iter < 1 or self.tol <= 0:
            raise ValueError("max_iter and tol must be positive")


def gerchberg_saxton(frame: Frame, y, x0, opts: GSOptions | None = None, x_true=None) -> ReconResult:
    """Alternate between the measured magnitudes and the coefficient range.

    Each sweep: analyze the iterate, replace coefficient magnitudes by
    sqrt(y) while keeping phases (zero coefficients get phase 1), synthesize
    with the canonical dual.  Convergence is not guaranteed; the best iterate
    by magnitude residual is returned and the stopping rule is a relative
    change test on that residual.  Negative measurements are clamped to zero.
    """
    opts = opts or GSOptions()
    y = np.maximum(_values(y), 0.0)
    r = np.sqrt(y)
    duals = canonical_dual(frame)
    x = np.asarray(x0, dtype=complex).copy()
    best_res = np.inf
    best_x = x
    best_it = 0
    trace_log: list[float] = []
    prev_res = None
    converged = False
    it = 0
    floor = opts.tol * max(float(np.linalg.norm(r)), 1.0)
    for it in range(1, opts.max_iter + 1):
        c = analysis(frame, x)
        absc = np.abs(c)
        d = np.where(absc > 0.0, r * c / np.where(absc > 0.0, absc, 1.0), r)
        x = synthesis(duals, d)
        res = float(np.linalg.norm(np.abs(analysis(frame, x)) - r))
        trace_log.append(res)
        if res < best_res:
            best_res, best_x, best_it = res, x, it
        if res <= floor or (
            prev_res is not None and abs(prev_res - res) <= opts.tol * max(prev_res, floor)
        ):
            converged = True
            break
        prev_res = res
    result = ReconResult(
        x_hat=best_x,
        iterations=it,
        residual=_vector_residual(frame, best_x, y),
        converged=converged,
        trace=trace_log,
        diagnostics={"best_iteration": best_it, "magnitude_residual": best_res},
    )
    return _attach_errors(result, x_true)


# ---------------------------------------------------------------------------
# spectral initialization shared by the iterative solvers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralInit:
    a1: float
    e1: np.ndarray
    x0: np.ndarray
    mode: str
    converged: bool


def spectral_init(frame: Frame, y, mode: str = "wf", rho: float = 0.5, seed: int = 0) -> SpectralInit:
    """Scaled principal eigenvector of the measurement-weighted frame operator.

    The weighted operator sum_k y_k f_k f_k* may be indefinite for noisy y, so
    the power iteration runs on a diagonally shifted PSD copy; the reported
    a1 is the top algebraic eigenvalue.  mode "wf" scales the start point so
    its energy matches the measurements; mode "irls" uses the regularized
    scale and returns the zero sentinel when a1 <= 0.
    """
    y = _values(y)
    V = frame.vectors
    Ry = hermitian_part(np.einsum("k,ki,kj->ij", y, V, V.conj()))
    # negative measurement weights can make the operator indefinite; shift by
    # a bound on the negative part only, so the iteration gap stays healthy
    shift = float(np.sum(np.maximum(-y, 0.0) * np.linalg.norm(V, axis=1) ** 2))
    if shift > 0.0:
        shift += 1e-3 * float(np.sum(np.abs(y)))
    lam_sh, e1, ok = power_method(Ry + shift * np.eye(frame.n), seed=seed)
    a1 = lam_sh - shift
    if mode == "wf":
        total = float(np.sum(np.linalg.norm(V, axis=1) ** 2))
        scale = np.sqrt(max(frame.n * float(np.sum(y)) / total, 0.0))
        x0 = scale * e1
    elif mode == "irls":
        if a1 <= 0.0:
            return SpectralInit(a1=a1, e1=e1, x0=np.zeros(frame.n, dtype=complex), mode=mode, converged=ok)
        c = V.conj() @ e1
        fourth = float(np.sum(np.abs(c) ** 4))
        x0 = np.sqrt((1.0 - rho) * a1 / max(fourth, np.finfo(float).tiny)) * e1
    else:
        raise ValueError(f"unknown spectral_init mode {mode!r}")
    return SpectralInit(a1=a1, e1=e1, x0=x0, mode=mode, converged=ok)


# ---------------------------------------------------------------------------
# Wirtinger flow
# ---------------------------------------------------------------------------

@dataclass
class WirtingerOptions:
    mu_max: float = 0.2
    tau0: float = 330.0
    max_iter: int = 2500
    tol: float = 1e-9
    seed: int = 0
    x0: Optional[np.ndarray] = None  # overrides the spectral start

    def __post_init__(self):
        if not (0.0 < self.mu_max <= 1.0) or self.tau0 <= 0:
            raise ValueError("mu_max must lie in (0, 1] and tau0 be positive")
        if self.max_iter < 1 or self.tol <= 0:
            raise ValueError("max_iter and tol must be positive")


def wirtinger_flow(frame: Frame, y, opts: WirtingerOptions | None = None, x_true=None) -> ReconResult:
    """Gradient descent on the squared intensity misfit with a ramped step.

    Starts from the spectral initialization (energy-matched scaling), then
    iterates x <- x - (mu_t / ||x0||^2) g with g the m-averaged misfit
    direction sum_k (|<x,f_k>|^2 - y_k) <x,f_k> f_k and the step schedule
    mu_t = min(mu_max, 1 - exp(-t / tau0)), t the iteration counter.  Stops on
    a relative gradient-norm test or at the iteration cap.
    """
    opts = opts or WirtingerOptions()
    y = np.maximum(_values(y), 0.0)
    m = frame.m
    if opts.x0 is not None:
        x = np.asarray(opts.x0, dtype=complex).copy()
    else:
        x = spectral_init(frame, y, mode="wf", seed=opts.seed).x0
    norm0_sq = float(np.vdot(x, x).real)
    if norm0_sq == 0.0:
        result = ReconResult(
            x_hat=x, iterations=0, residual=_vector_residual(frame, x, y),
            converged=True, trace=[], diagnostics={"note": "zero initialization"},
        )
        return _attach_errors(result, x_true)
    trace_log: list[float] = []
    converged = False
    it = 0
    gscale = max(norm0_sq ** 1.5, np.finfo(float).tiny)
    for it in range(1, opts.max_iter + 1):
        c = analysis(frame, x)
        misfit = (c * c.conj()).real - y
        g = synthesis(frame, misfit * c) / m
        gnorm = float(np.linalg.norm(g))
        trace_log.append(float(np.linalg.norm(misfit)))
        if gnorm <= opts.tol * gscale:
            converged = True
            break
        mu = min(opts.mu_max, 1.0 - np.exp(-it / opts.tau0))
        x = x - (mu / norm0_sq) * g
    result = ReconResult(
        x_hat=x,
        iterations=it,
        residual=_vector_residual(frame, x, y),
        converged=converged,
        trace=trace_log,
    )
    return _attach_errors(result, x_true)


# ---------------------------------------------------------------------------
# iterated regularized least squares on the bilinear criterion
# ---------------------------------------------------------------------------

@dataclass
class IRLSOptions:
    rho: float = 0.5
    gamma: float = 0.85
    mu_min: float = 1e-6
    lambda_min: float = 0.0  # floor for the decaying ridge weight
    eps: Optional[float] = None  # auto: 1e-10 ||y||^2
    snr_target: Optional[float] = None
    max_outer: int = 400
    cg_tol: float = 1e-12
    seed: int = 0
    x0: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (0.0 < self.rho < 1.0) or not (0.0 < self.gamma <= 1.0):
            raise ValueError("rho must lie in (0, 1) and gamma in (0, 1]")
        if self.mu_min <= 0 or self.lambda_min < 0 or self.cg_tol <= 0:
            raise ValueError("mu_min, lambda_min, cg_tol must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be positive")
        if self.eps is not None and self.eps <= 0:
            raise ValueError("eps must be positive when given")
        if self.snr_target is not None and self.snr_target <= 0:
            raise ValueError("snr_target must be positive when given")


def irls_objective(frame: Frame, u, v, lam: float, mu: float, y) -> float:
    """Bilinear criterion: squared misfit of the symmetrized coefficient
    product against y, plus Tikhonov terms on u, v and their difference."""
    y = _values(y)
    cu = analysis(frame, np.asarray(u, dtype=complex))
    cv = analysis(frame, np.asarray(v, dtype=complex))
    model = (cu * cv.conj()).real
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return float(
        np.sum((model - y) ** 2)
        + lam * np.vdot(u, u).real
        + mu * np.vdot(u - v, u - v).real
        + lam * np.vdot(v, v).real
    )


def irls(frame: Frame, y, opts: IRLSOptions | None = None, x_true=None) -> ReconResult:
    """Iterated regularized least squares with geometrically decaying weights.

    Each outer step freezes v at the current iterate and minimizes the
    criterion over u: a quadratic in the realified coordinates solved by
    conjugate gradients on its normal equations (warm-started at v, which
    guarantees the subproblem value never exceeds the diagonal value).  The
    ridge weight decays geometrically, the coupling weight decays to a floor,
    and the reported estimate is the best iterate along the path by pure
    misfit.
    """
    opts = opts or IRLSOptions()
    y = _values(y)
    ysq = float(y @ y)
    eps = opts.eps if opts.eps is not None else 1e-10 * ysq
    init = spectral_init(frame, y, mode="irls", rho=opts.rho, seed=opts.seed)
    if opts.x0 is not None:
        x = np.asarray(opts.x0, dtype=complex).copy()
    else:
        x = init.x0
    if init.a1 <= 0.0 and opts.x0 is None:
        result = ReconResult(
            x_hat=np.zeros(frame.n, dtype=complex),
            iterations=0,
            residual=float(np.linalg.norm(y)),
            converged=True,
            flags=["nonpositive_top_eigenvalue"],
            diagnostics={"a1": init.a1},
        )
        return _attach_errors(result, x_true)
    lam = opts.rho * init.a1
    mu = opts.rho * init.a1
    d = 2 * frame.n
    best_val = np.inf
    best_x = x
    trace_log: list[float] = []
    outer_log: list[dict] = []
    cg_ok = True
    converged = False
    it = 0
    u = x
    for it in range(1, opts.max_outer + 1):
        xi_v = realify(x)
        Z = gradient_columns(frame, xi_v)
        ridge = lam + mu

        def apply_normal(p, Z=Z, ridge=ridge):
            return Z @ (Z.T @ p) + ridge * p

        rhs = Z @ y + mu * xi_v
        xi_u, ok, n_cg = cg_solve(apply_normal, rhs, tol=opts.cg_tol, max_iter=20 * d, x0=xi_v)
        cg_ok = cg_ok and ok
        u = complexify(xi_u)
        sub_before = irls_objective(frame, x, x, lam, mu, y)
        sub_after = irls_objective(frame, u, x, lam, mu, y)
        misfit = irls_objective(frame, u, u, 0.0, 0.0, y)
        outer_log.append(
            {"lam": lam, "mu": mu, "J_sub_before": sub_before, "J_sub_after": sub_after,
             "J_misfit": misfit, "cg_iterations": n_cg}
        )
        trace_log.append(misfit)
        prev = x
        x = u
        if misfit < best_val:
            best_val = misfit
            best_x = x
        lam = max(opts.gamma * lam, opts.lambda_min)
        mu = max(opts.gamma * mu, opts.mu_min)
        if misfit < eps:
            converged = True
            break
        if opts.snr_target is not None and misfit > 0.0:
            if float(np.vdot(x, x).real) / misfit > opts.snr_target:
                converged = True
                break
    result = ReconResult(
        x_hat=best_x,
        iterations=it,
        residual=float(np.sqrt(best_val)),
        converged=converged,
        trace=trace_log,
        flags=[] if cg_ok else ["cg_tolerance_missed"],
        diagnostics={
            "outer_log": outer_log,
            "final_pair": (u, prev if it else x),
            "a1": init.a1,
            "best_misfit": best_val,
        },
    )
    return _attach_errors(result, x_true)
