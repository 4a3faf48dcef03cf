"""Phase-retrievability certificates and stability (Lipschitz) bounds.

Real frames are decided exactly by bipartition span enumeration, which also
yields an ambiguous-pair witness when the frame fails.  Complex frames are
certified by lower-bounding the second-smallest eigenvalue of the gradient
Gram operator over a net of the unit sphere, with a Weyl perturbation argument
extending the bound from the net to the whole sphere.

The eigenvalue map xi -> lambda_{2n-1}(gradient_gram(xi)) is exactly invariant
under the phase orbit xi -> cos(t) xi + sin(t) J xi, so the net only needs to
cover the (2n-2)-dimensional phase quotient of the sphere; covering radii are
measured in the quotient metric sqrt(2 - 2 |<u, v>|).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil, log2

import numpy as np
from scipy.stats import qmc
from scipy.special import ndtri

from .errors import BudgetExceeded, InvalidPartition, NotPhaseRetrievable
from .frames import Frame, frame_bounds, magnitude_map, rng_from_seed
from .lifting import (
    apply_complex_structure,
    complexify,
    gradient_gram,
    measurement_forms,
    normalized_gradient_gram,
    realify,
)
from .linalg import hermitian_eig
from .metrics import quotient_distance

SPAN_TOL = 1e-10  # relative singular-value threshold for span tests
_SCAN_CHUNK = 65536


@dataclass(frozen=True)
class PRCertificate:
    """Outcome of a phase-retrievability decision procedure.

    verdict "retrievable" carries a strictly positive certified margin
    ``a0_lower`` (partition margin for real frames, net-certified eigenvalue
    bound for complex frames).  verdict "not_retrievable" carries a verified
    ambiguous pair ``witness = (x, y)`` with equal magnitude measurements and
    distinct phase classes.
    """

    verdict: str
    a0_lower: float | None = None
    witness: tuple[np.ndarray, np.ndarray] | None = None
    epsilon_final: float | None = None
    nets_tested: int = 0
    b0_bound: float | None = None
    net_points: int | None = None
    seed: int | None = None
    notes: str = ""

    def to_dict(self) -> dict:
        def vec(v):
            return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]

        return {
            "verdict": self.verdict,
            "a0_lower": self.a0_lower,
            "witness": None if self.witness is None else [vec(self.witness[0]), vec(self.witness[1])],
            "epsilon_final": self.epsilon_final,
            "nets_tested": self.nets_tested,
            "b0_bound": self.b0_bound,
            "net_points": self.net_points,
            "seed": self.seed,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


@dataclass(frozen=True)
class BoundsReport:
    """Global stability constants and optional per-point records.

    A0/B0 bound the magnitude map against the phase-quotient 2-distance,
    a0/b0 bound the intensity map against the lifted 1-distance.  When
    ``empirical`` is True the values are Monte-Carlo brackets, not certified.
    """

    A0: float | None = None
    B0: float | None = None
    a0: float | None = None
    b0: float | None = None
    local: list = field(default_factory=list)
    empirical: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "A0": self.A0,
            "B0": self.B0,
            "a0": self.a0,
            "b0": self.b0,
            "local": self.local,
            "empirical": self.empirical,
            "details": self.details,
        }


def min_measurement_count(n: int) -> int:
    """Lower bound on the number of vectors any complex phase-retrievable
    frame must have, in terms of the binary expansion of n - 1."""
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    b = bin(n - 1).count("1")
    extra = 0
    if n % 2 == 1:
        if b % 4 == 3:
            extra = 2
        elif b % 4 == 2:
            extra = 1
    return 4 * n - 2 - 2 * b + extra


# ---------------------------------------------------------------------------
# real case: bipartition enumeration
# ---------------------------------------------------------------------------

def _bipartition_scan(frame: Frame, partition_cap: int):
    """Enumerate all 2^(m-1) unordered bipartitions of the frame.

    Returns (A0, fail_subset) where A0 is the minimum over partitions of the
    sum of the two lower frame bounds, and fail_subset is an index list for
    the first partition where neither side spans (None when every partition
    has a spanning side).
    """
    m, n = frame.m, frame.n
    if m > partition_cap:
        raise BudgetExceeded(f"m={m} exceeds partition cap {partition_cap}")
    V = frame.vectors.real
    O = np.einsum("ki,kj->kij", V, V)
    S_total = O.sum(axis=0)
    smax = np.linalg.norm(V, 2)
    # Gram eigenvalues only resolve zeros to ~eps * ||S||, far above the
    # squared singular-value threshold; screen loosely here and confirm
    # candidate failures with an SVD of the actual subsets below
    screen_tol = max((SPAN_TOL * smax) ** 2, 64 * m * np.finfo(float).eps * smax**2)

    def _deficient(rows) -> bool:
        if rows.shape[0] < n:
            return True
        s = np.linalg.svd(rows, compute_uv=False)
        return s[-1] <= SPAN_TOL * max(smax, np.finfo(float).tiny)

    A0 = np.inf
    fail_subset = None
    n_masks = 1 << (m - 1)
    chunk = max(1, min(131072, n_masks))
    shifts = np.arange(m - 1, dtype=np.uint64)
    for start in range(0, n_masks, chunk):
        masks = np.arange(start, min(start + chunk, n_masks), dtype=np.uint64)
        bits = ((masks[:, None] >> shifts) & 1).astype(float)  # indices 1..m-1
        inc = np.concatenate([np.zeros((bits.shape[0], 1)), bits], axis=1)
        S_I = np.einsum("ck,kij->cij", inc, O)
        lam_I = np.linalg.eigvalsh(S_I)[:, 0]
        lam_Ic = np.linalg.eigvalsh(S_total[None] - S_I)[:, 0]
        sums = lam_I + lam_Ic
        idx = int(np.argmin(sums))
        if sums[idx] < A0:
            A0 = float(sums[idx])
        if fail_subset is None:
            for cand in np.flatnonzero((lam_I <= screen_tol) & (lam_Ic <= screen_tol)):
                mask = int(masks[cand])
                subset = [k + 1 for k in range(m - 1) if (mask >> k) & 1]
                comp = [k for k in range(m) if k not in subset]
                if _deficient(V[subset]) and _deficient(V[comp]):
                    fail_subset = subset
                    break
    return A0, fail_subset


def _null_direction(rows: np.ndarray, n: int, tol: float):
    """Unit vector orthogonal to the span of the given row vectors,
    or None when the rows span R^n."""
    if rows.shape[0] == 0:
        e = np.zeros(n)
        e[0] = 1.0
        return e
    _, s, vh = np.linalg.svd(rows, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * max(smax, 1.0)))
    if rank >= n:
        return None
    return vh[-1].real


def ambiguous_pair_real(frame: Frame, subset) -> tuple[np.ndarray, np.ndarray]:
    """Ambiguous pair (x, y) = (u + v, u - v) from a failing bipartition.

    ``subset`` indexes one side of the partition; u is a unit null direction
    of that side's span and v of the complement's.  The construction makes
    both magnitude measurement vectors equal while keeping the phase classes
    distinct.
    """
    if not frame.is_real:
        raise InvalidPartition("ambiguous pair construction applies to real frames")
    V = frame.vectors.real
    subset = sorted(set(int(k) for k in subset))
    comp = [k for k in range(frame.m) if k not in subset]
    u = _null_direction(V[subset], frame.n, SPAN_TOL)
    v = _null_direction(V[comp], frame.n, SPAN_TOL)
    if u is None or v is None:
        raise InvalidPartition("one side of the partition spans the space")
    x = (u + v).astype(complex)
    y = (u - v).astype(complex)
    return x, y


def check_retrievable_real(frame: Frame, partition_cap: int = 24) -> PRCertificate:
    """Exact decision for real-tagged frames by bipartition enumeration.

    Retrievable iff every bipartition has a side spanning R^n; the certified
    margin is the minimum over partitions of the sum of the two lower frame
    bounds.  Non-retrievable verdicts ship a verified witness pair.
    """
    if not frame.is_real:
        raise InvalidPartition("check_retrievable_real requires a real-tagged frame")
    A0, fail_subset = _bipartition_scan(frame, partition_cap)
    if fail_subset is None and A0 > 0.0:
        return PRCertificate(verdict="retrievable", a0_lower=A0)
    if fail_subset is None:
        # numerically zero margin without an explicit failing mask
        return PRCertificate(verdict="undecided", notes="zero partition margin")
    x, y = ambiguous_pair_real(frame, fail_subset)
    return PRCertificate(
        verdict="not_retrievable",
        witness=(x, y),
        notes=f"failing partition subset {fail_subset}",
    )


# ---------------------------------------------------------------------------
# complex case: sphere-net certification
# ---------------------------------------------------------------------------

def sphere_net(dim: int, n_points: int, seed: int = 0) -> np.ndarray:
    """Deterministic low-discrepancy point set on the unit sphere of R^dim.

    Scrambled Sobol points mapped through the normal quantile and normalized;
    the point count is rounded up to a power of two for balance.
    """
    n_points = max(int(n_points), 2)
    k = ceil(log2(n_points))
    sob = qmc.Sobol(d=dim, scramble=True, seed=rng_from_seed(seed))
    u = sob.random_base2(k)
    g = ndtri(np.clip(u, 1e-15, 1.0 - 1e-15))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return g / norms


def bloch_fibonacci_net(n_points: int, seed: int = 0) -> np.ndarray:
    """Fibonacci lattice on the phase quotient of the unit sphere of C^2.

    Classes of unit vectors in C^2 form a 2-sphere; the lattice covers it
    near-optimally and each class is realified through the representative
    (cos(t/2), sin(t/2) e^{i phi}).  ``seed`` rotates the longitude origin.
    """
    n_points = max(int(n_points), 2)
    i = np.arange(n_points)
    z = 1.0 - (2.0 * i + 1.0) / n_points
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    golden = np.pi * (3.0 - np.sqrt(5.0))
    phi = i * golden + 0.61803398875 * (seed if np.isscalar(seed) else sum(seed))
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    x0 = c.astype(complex)
    x1 = s * np.exp(1j * phi)
    return np.column_stack([x0.real, x1.real, x0.imag, x1.imag])


def quotient_covering_radius(
    net: np.ndarray, n_probes: int = 512, seed: int = 0
) -> float:
    """Sampled covering radius of a sphere net in the phase-quotient metric.

    Probes are random unit vectors; for each, the distance to the net is
    min_j sqrt(2 - 2 |<u, v_j>|) over the complexified points (distance to the
    full phase orbit of v_j, antipodes included).  The estimate is inflated by
    a small safety factor; it remains a sampled estimate, not a proof.
    """
    N, d = net.shape
    n = d // 2
    jnet = np.concatenate([-net[:, n:], net[:, :n]], axis=1)
    rng = rng_from_seed([seed, 0x636F7665])
    probes = rng.normal(size=(n_probes, d))
    probes /= np.linalg.norm(probes, axis=1, keepdims=True)
    probes_t = probes.T.copy()
    best = np.zeros(n_probes)
    chunk = 32768
    for start in range(0, N, chunk):
        re = net[start : start + chunk] @ probes_t
        im = jnet[start : start + chunk] @ probes_t
        np.square(re, out=re)
        np.square(im, out=im)
        re += im
        best = np.maximum(best, re.max(axis=0))
    eps = float(np.sqrt(np.maximum(2.0 - 2.0 * np.sqrt(best), 0.0)).max())
    # the probe max is a lower estimate of the true covering radius; the
    # inflation absorbs the sampling gap observed against dense probe sets
    return 1.12 * eps


def _sym3_eig_extremes(A: np.ndarray):
    """Smallest and largest eigenvalue of a batch of symmetric 3x3 matrices
    by the trigonometric closed form (no LAPACK round trip)."""
    a00, a11, a22 = A[:, 0, 0], A[:, 1, 1], A[:, 2, 2]
    a01, a02, a12 = A[:, 0, 1], A[:, 0, 2], A[:, 1, 2]
    q = (a00 + a11 + a22) / 3.0
    p1 = a01**2 + a02**2 + a12**2
    p2 = (a00 - q) ** 2 + (a11 - q) ** 2 + (a22 - q) ** 2 + 2.0 * p1
    p = np.sqrt(np.maximum(p2 / 6.0, 0.0))
    safe = np.where(p > 0.0, p, 1.0)
    b00, b11, b22 = (a00 - q) / safe, (a11 - q) / safe, (a22 - q) / safe
    b01, b02, b12 = a01 / safe, a02 / safe, a12 / safe
    detb = (
        b00 * (b11 * b22 - b12 * b12)
        - b01 * (b01 * b22 - b12 * b02)
        + b02 * (b01 * b12 - b11 * b02)
    )
    r = np.clip(detb / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    lam_max = q + 2.0 * p * np.cos(phi)
    lam_min = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    return lam_min, lam_max


def _restricted_gram_3x3(R: np.ndarray, Xi: np.ndarray) -> np.ndarray:
    """Compress each 4x4 gradient Gram onto the complement of its exact
    kernel direction J xi (Householder reflection), giving 3x3 blocks."""
    n2 = Xi.shape[1] // 2
    q = np.concatenate([-Xi[:, n2:], Xi[:, :n2]], axis=1)  # J xi, unit
    sign = np.where(q[:, 0] >= 0.0, 1.0, -1.0)
    v = q.copy()
    v[:, 0] += sign
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    Rv = np.einsum("nij,nj->ni", R, v)
    vRv = np.einsum("ni,ni->n", v, Rv)
    M = (
        R
        - 2.0 * v[:, :, None] * Rv[:, None, :]
        - 2.0 * Rv[:, :, None] * v[:, None, :]
        + 4.0 * vRv[:, None, None] * (v[:, :, None] * v[:, None, :])
    )
    return M[:, 1:, 1:]


def _scan_net(phi: np.ndarray, jphi: np.ndarray, net: np.ndarray):
    """Batched eigenvalues of the gradient Gram over net points.

    Returns (min second-smallest, max largest, argmin point).  For ambient
    dimension 4 the exact kernel direction is reflected away and the
    remaining 3x3 spectrum is evaluated in closed form.
    """
    d = net.shape[1]
    m = phi.shape[0]
    chunk = max(4096, min(_SCAN_CHUNK, int(8e6 / max(m * d, 1))))
    lam3_min = np.inf
    lam1_max = 0.0
    argmin = net[0]
    for start in range(0, net.shape[0], chunk):
        Xi = net[start : start + chunk]
        P = Xi @ phi.T
        Q = Xi @ jphi.T
        W = P[:, :, None] * phi[None] + Q[:, :, None] * jphi[None]
        R = W.transpose(0, 2, 1) @ W
        if d == 4:
            lam3, lam1 = _sym3_eig_extremes(_restricted_gram_3x3(R, Xi))
        else:
            ev = np.linalg.eigvalsh(R)
            lam3, lam1 = ev[:, 1], ev[:, -1]
        k = int(np.argmin(lam3))
        if lam3[k] < lam3_min:
            lam3_min = float(lam3[k])
            argmin = Xi[k].copy()
        lam1_max = max(lam1_max, float(lam1.max()))
    return lam3_min, lam1_max, argmin


def _alternating_kernel_pair(frame: Frame, xi0: np.ndarray, deflate: float, iters: int = 80):
    """Polish a candidate degenerate direction into an exact kernel pair.

    Alternates exact restricted eigensolves of the gradient Gram in xi and in
    the paired direction; the coupling energy sum_k <Phi_k xi, v>^2 is
    nonincreasing and reaches roundoff level when the frame is genuinely
    non-retrievable.  Returns (xi, v, energy).
    """
    xi = xi0 / np.linalg.norm(xi0)
    v = None
    energy = np.inf
    for _ in range(iters):
        R = gradient_gram(frame, xi)
        jxi = apply_complex_structure(xi)
        dec = hermitian_eig(R + deflate * np.outer(jxi, jxi))
        v = dec.eigenvectors[:, -1]
        R2 = gradient_gram(frame, v)
        jv = apply_complex_structure(v)
        dec2 = hermitian_eig(R2 + deflate * np.outer(jv, jv))
        xi_new = dec2.eigenvectors[:, -1]
        new_energy = float(xi_new @ R2 @ xi_new)
        if new_energy >= energy * (1.0 - 1e-12):
            xi = xi_new
            energy = new_energy
            break
        xi = xi_new
        energy = new_energy
    return xi, v, energy


def _verify_witness(frame: Frame, x, y) -> bool:
    ax = magnitude_map(frame, x).values
    ay = magnitude_map(frame, y).values
    scale = max(1.0, float(np.max(ax)))
    if np.max(np.abs(ax - ay)) > 1e-12 * scale:
        return False
    return quotient_distance(x, y, 2) > 1e-6


def certify_retrievable_complex(
    frame: Frame,
    eps0: float = 0.5,
    budget: int = 4_000_000,
    seed: int = 0,
    max_rounds: int = 16,
    n_cap: int = 3,
    n_probes: int = 768,
) -> PRCertificate:
    """Certify complex phase retrievability over an eps-net of the sphere.

    Each round evaluates the second-smallest eigenvalue of the gradient Gram
    on a deterministic net, sets the candidate margin to half the minimum, and
    stops when twice the global-spectral-bound times the net covering radius
    falls below the margin (Weyl perturbation argument); otherwise the target
    radius is halved and a larger net is drawn.  The global spectral bound
    starts at B * max_k ||f_k||^2 and is tightened each round by the sound
    update b <- min(b, max_net lambda_1 + 2 b eps).  Whenever a round fails to
    certify, its worst direction is polished by alternating eigensolves into a
    candidate ambiguous pair; only a verified pair produces a
    "not_retrievable" verdict.  Budget or round exhaustion yields "undecided".
    """
    n = frame.n
    if n > n_cap:
        return PRCertificate(
            verdict="undecided",
            seed=seed,
            notes=f"ambient dimension {n} above cap {n_cap}; raise n_cap to force",
        )
    d = 2 * n
    V = frame.vectors
    phi = np.concatenate([V.real, V.imag], axis=1)
    jphi = np.concatenate([-V.imag, V.real], axis=1)
    _, B = frame_bounds(frame)
    b0 = B * float(np.max(np.linalg.norm(V, axis=1) ** 2))
    quotient_dim = max(2 * n - 2, 1)

    def make_net(count, rnd):
        if n == 2:
            return bloch_fibonacci_net(count, seed=[seed, rnd])
        return sphere_net(d, count, seed=[seed, rnd])

    eps_target = eps0
    n_points = 1024
    nets = 0
    coef = None  # covering-law coefficient eps ~ coef / N^(1/quotient_dim)
    at_cap = False
    for rnd in range(max_rounds):
        net = make_net(n_points, rnd)
        n_built = net.shape[0]
        lam3_min, lam1_max, xi_min = _scan_net(phi, jphi, net)
        nets += 1
        if n_built <= (1 << 18) or coef is None:
            eps_hat = quotient_covering_radius(net, n_probes=n_probes, seed=seed + rnd)
            coef = eps_hat * n_built ** (1.0 / quotient_dim)
        else:
            # the lattice covering radius follows coef / N^(1/dim) closely;
            # beyond the measurement size, extrapolate with a safety margin
            eps_hat = 1.1 * coef / n_built ** (1.0 / quotient_dim)
        if 2.0 * eps_hat < 1.0:
            for _ in range(4):
                b0 = min(b0, lam1_max + 2.0 * b0 * eps_hat)
        a0 = 0.5 * lam3_min
        if a0 > 0.0 and 2.0 * b0 * eps_hat <= a0:
            return PRCertificate(
                verdict="retrievable",
                a0_lower=a0,
                epsilon_final=eps_hat,
                nets_tested=nets,
                b0_bound=b0,
                seed=seed,
                net_points=n_built,
            )
        salvage = lam3_min - 2.0 * b0 * eps_hat
        if at_cap and salvage > 0.0:
            # budget-capped fallback: a thinner but still positive certified
            # margin (Weyl slack subtracted directly from the net minimum)
            return PRCertificate(
                verdict="retrievable",
                a0_lower=salvage,
                epsilon_final=eps_hat,
                nets_tested=nets,
                b0_bound=b0,
                seed=seed,
                net_points=n_built,
                notes="margin from budget-capped net (below the half-minimum rule)",
            )
        # not certifiable at this radius: before paying for a larger net, try
        # to polish the worst direction into an exact ambiguous pair
        xi, v, energy = _alternating_kernel_pair(frame, xi_min, deflate=2.0 * b0 + 1.0)
        u = complexify(xi)
        w = complexify(v)
        x, y = u + w, u - w
        if _verify_witness(frame, x, y):
            return PRCertificate(
                verdict="not_retrievable",
                witness=(x, y),
                epsilon_final=eps_hat,
                nets_tested=nets,
                b0_bound=b0,
                seed=seed,
                net_points=n_built,
                notes=f"kernel pair energy {energy:.3e}",
            )
        if at_cap:
            return PRCertificate(
                verdict="undecided",
                nets_tested=nets,
                b0_bound=b0,
                seed=seed,
                net_points=n_built,
                notes="net budget exhausted",
            )
        eps_target = min(eps_target, eps_hat) * 0.5
        needed = a0 / (2.0 * b0) if a0 > 0 else eps_target
        goal = max(min(eps_target, needed), 1e-12)
        n_points = int(max(1.3 * (coef / goal) ** quotient_dim, 2 * n_built))
        if n_points > budget:
            n_points = budget
            at_cap = True
    return PRCertificate(
        verdict="undecided",
        nets_tested=nets,
        b0_bound=b0,
        seed=seed,
        notes="round budget exhausted",
    )


# ---------------------------------------------------------------------------
# stability bounds
# ---------------------------------------------------------------------------

def _project_sphere(x):
    return x / np.linalg.norm(x)


def _multistart_extremum(value_grad, dim, n_starts, seed, maximize, iters=400, tol=1e-10):
    """Projected-gradient multistart over the unit sphere of R^dim.

    ``value_grad(x) -> (value, grad)``; returns (best value, best point).
    """
    rng = rng_from_seed([seed, 0x73706872])
    starts = [rng.normal(size=dim) for _ in range(n_starts)]
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = 1.0
        starts.append(e)
    sign = -1.0 if maximize else 1.0
    best_val, best_x = np.inf, None
    for s in starts:
        x = _project_sphere(s)
        val, grad = value_grad(x)
        val *= sign
        step = 0.5
        for _ in range(iters):
            g = sign * grad
            g_tan = g - (g @ x) * x
            gnorm = np.linalg.norm(g_tan)
            if gnorm <= tol * max(abs(val), 1.0):
                break
            improved = False
            while step > 1e-14:
                x_new = _project_sphere(x - step * g_tan)
                val_new, grad_new = value_grad(x_new)
                val_new *= sign
                if val_new < val - 1e-14 * abs(val):
                    x, val, grad = x_new, val_new, grad_new
                    step *= 1.3
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
        if val < best_val:
            best_val, best_x = val, x
    return sign * best_val, best_x


def fourth_moment_max(frame: Frame, n_starts: int = 64, seed: int = 0) -> float:
    """max over unit x of sum_k |<x, f_k>|^4 by projected-gradient multistart.

    Real-tagged frames are optimized over the real sphere, complex frames over
    the realified sphere (the objective is phase-invariant).
    """
    if frame.is_real:
        V = frame.vectors.real

        def value_grad(x):
            c = V @ x
            return float(np.sum(c**4)), 4.0 * (V.T @ (c**3))

        val, _ = _multistart_extremum(value_grad, frame.n, n_starts, seed, maximize=True)
        return val

    V = frame.vectors
    phi = np.concatenate([V.real, V.imag], axis=1)
    jphi = np.concatenate([-V.imag, V.real], axis=1)

    def value_grad(xi):
        p = phi @ xi
        q = jphi @ xi
        s = p * p + q * q
        grad = 4.0 * (phi.T @ (s * p) + jphi.T @ (s * q))
        return float(np.sum(s * s)), grad

    val, _ = _multistart_extremum(value_grad, 2 * frame.n, n_starts, seed, maximize=True)
    return val


def _min_weighted_operator_eig(frame: Frame, n_starts: int, seed: int):
    """min over unit real x of lambda_min(sum_k <x,f_k>^2 f_k f_k^T)."""
    V = frame.vectors.real
    O = np.einsum("ki,kj->kij", V, V)

    def value_grad(x):
        c = V @ x
        R = np.einsum("k,kij->ij", c**2, O)
        w, vecs = np.linalg.eigh(R)
        v = vecs[:, 0]
        grad = 2.0 * (V.T @ (c * (V @ v) ** 2))
        return float(w[0]), grad

    return _multistart_extremum(value_grad, frame.n, n_starts, seed, maximize=False)


def support_lower_bound(frame: Frame, x, tol: float = SPAN_TOL) -> float:
    """Local magnitude-map lower bound at x for real frames: the lower frame
    bound of the subset of vectors not orthogonal to x."""
    V = frame.vectors.real
    c = V @ np.asarray(x, dtype=float)
    scale = np.linalg.norm(V, axis=1) * np.linalg.norm(x)
    supp = np.abs(c) > tol * np.maximum(scale, np.finfo(float).tiny)
    if not np.any(supp):
        return 0.0
    S = V[supp].T @ V[supp]
    return float(np.linalg.eigvalsh(S)[0])


def stability_bounds_real(
    frame: Frame,
    n_starts: int = 64,
    seed: int = 0,
    partition_cap: int = 24,
    at_points=None,
) -> BoundsReport:
    """Certified global stability constants for a real phase-retrievable frame.

    A0 comes from exhaustive bipartition enumeration, B0 equals the upper
    frame bound, and a0/b0 are sphere extrema found by projected-gradient
    multistart (reported as refined numerical values, certified only through
    the partition/net machinery).
    """
    if not frame.is_real:
        raise InvalidPartition("stability_bounds_real requires a real-tagged frame")
    A, B = frame_bounds(frame)
    A0, fail_subset = _bipartition_scan(frame, partition_cap)
    if fail_subset is not None or A0 <= 0.0:
        raise NotPhaseRetrievable("frame is not phase retrievable; A0 = 0")
    a0, _ = _min_weighted_operator_eig(frame, n_starts, seed)
    b0 = fourth_moment_max(frame, n_starts, seed)
    local = []
    for z in at_points or []:
        rec = local_stability_bounds(frame, z)
        rec["A_support"] = support_lower_bound(frame, np.asarray(z, dtype=complex).real)
        local.append(rec)
    return BoundsReport(
        A0=A0,
        B0=B,
        a0=float(a0),
        b0=float(b0),
        local=local,
        empirical=False,
        details={"A": A, "B": B, "n_starts": n_starts, "seed": seed},
    )


def local_stability_bounds(frame: Frame, z, zero_tol: float = 1e-12) -> dict:
    """Per-point stability record for the complex-case formulas.

    A and a/b require z != 0 and are None at z = 0; A_tilde and B remain
    defined there and reduce to the optimal frame bounds.  The record reports
    the active set of vectors treated as orthogonal to z under ``zero_tol``.
    """
    z = np.asarray(z, dtype=complex)
    xi = realify(z)
    nz2 = float(xi @ xi)
    d = 2 * frame.n
    forms = measurement_forms(frame)
    c = frame.vectors.conj() @ z
    scale = np.linalg.norm(frame.vectors, axis=1) ** 2 * nz2
    zero_set = np.flatnonzero(
        (c * c.conj()).real <= zero_tol * np.maximum(scale, np.finfo(float).tiny)
    )
    correction = forms[zero_set].sum(axis=0) if zero_set.size else np.zeros((d, d))
    S_corr = normalized_gradient_gram(frame, xi, zero_tol) + correction
    ev_corr = np.linalg.eigvalsh(S_corr)
    record = {
        "A_tilde": float(ev_corr[1]),
        "B": float(ev_corr[-1]),
        "zero_set": [int(k) for k in zero_set],
    }
    if nz2 > 0.0:
        S_plain = normalized_gradient_gram(frame, xi, zero_tol)
        ev_plain = np.linalg.eigvalsh(S_plain)
        ev_R = np.linalg.eigvalsh(gradient_gram(frame, xi))
        record.update(
            A=float(ev_plain[1]),
            a=float(ev_R[1] / nz2),
            b=float(ev_R[-1] / nz2),
        )
    else:
        record.update(A=None, a=None, b=None)
    return record


def sampled_stability_bounds(frame: Frame, samples: int = 2000, seed: int = 0) -> BoundsReport:
    """Monte-Carlo brackets for the global stability constants.

    Draws both independent and perturbative pairs; the reported values are the
    sampled extrema of the defining difference quotients and are flagged
    non-certified.
    """
    rng = rng_from_seed([seed, 0x73616D70])
    n, m = frame.n, frame.m
    V = frame.vectors

    def draw(count):
        if frame.is_real:
            return rng.normal(size=(count, n)).astype(complex)
        return rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))

    half = samples // 2
    X1 = np.concatenate([draw(half), draw(samples - half)])
    X2 = np.empty_like(X1)
    X2[:half] = draw(half)
    # perturbation scale floor 1e-3: the difference quotients lose ~eps/delta^2
    # relative accuracy, and the sampled sup must stay below the true bound to
    # 1e-9
    deltas = 10.0 ** rng.uniform(-3, -1, size=(samples - half, 1))
    X2[half:] = X1[half:] + deltas * draw(samples - half)

    C1 = X1 @ V.conj().T
    C2 = X2 @ V.conj().T
    alpha1, alpha2 = np.abs(C1), np.abs(C2)
    beta1, beta2 = alpha1**2, alpha2**2
    ip = np.einsum("si,si->s", X1.conj(), X2)
    nx2 = np.einsum("si,si->s", X1.conj(), X1).real
    ny2 = np.einsum("si,si->s", X2.conj(), X2).real
    D2sq = np.maximum(nx2 + ny2 - 2.0 * np.abs(ip), 0.0)
    d1sq = np.maximum((nx2 + ny2) ** 2 - 4.0 * np.abs(ip) ** 2, 0.0)

    dalpha = np.sum((alpha1 - alpha2) ** 2, axis=1)
    dbeta = np.sum((beta1 - beta2) ** 2, axis=1)
    okA = D2sq > 1e-18 * np.maximum(nx2, ny2)
    oka = d1sq > 1e-24 * np.maximum(nx2, ny2) ** 2
    ratioA = dalpha[okA] / D2sq[okA]
    ratioa = dbeta[oka] / d1sq[oka]
    return BoundsReport(
        A0=float(ratioA.min()),
        B0=float(ratioA.max()),
        a0=float(ratioa.min()),
        b0=float(ratioa.max()),
        empirical=True,
        details={"samples": samples, "seed": seed},
    )
