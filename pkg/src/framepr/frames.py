"""Frames, analysis/synthesis maps, and the magnitude measurement maps.

A frame is a spanning set of m >= n vectors in C^n, stored as the rows of an
(m, n) complex array.  Real-tagged frames have exactly zero imaginary parts
and model measurement systems restricted to R^n.  The inner product convention
throughout the package is linear in the first argument and conjugate-linear in
the second: <x, f> = sum_i x_i conj(f_i).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import CombinatorialBudgetExceeded, DimensionMismatch, RankDeficient
from .linalg import hermitian_eig, hermitian_part

#: counter-based 64-bit generator used for every seeded draw in the package
RNG_NAME = "philox"


def rng_from_seed(seed) -> np.random.Generator:
    """Philox counter-based generator; the package-wide reproducibility contract."""
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class Frame:
    """m vectors spanning C^n (rows of ``vectors``)."""

    vectors: np.ndarray
    field: str  # "real" | "complex"

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @property
    def is_real(self) -> bool:
        return self.field == "real"


@dataclass(frozen=True)
class MeasurementVector:
    """Real measurement vector tagged by kind.

    kind "magnitude" holds |<x, f_k>|, kind "intensity" holds |<x, f_k>|^2.
    Noisy intensity measurements may have negative entries.
    """

    values: np.ndarray
    kind: str

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __len__(self) -> int:
        return len(self.values)


def make_frame(vectors, field: str | None = None) -> Frame:
    """Validate and build a Frame from an (m, n) array of row vectors."""
    V = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if not (np.all(np.isfinite(V.real)) and np.all(np.isfinite(V.imag))):
        raise ValueError("frame vectors must be finite")
    m, n = V.shape
    if m < n:
        raise RankDeficient(f"need m >= n vectors, got m={m}, n={n}")
    if field is None:
        field = "real" if np.all(V.imag == 0.0) else "complex"
    if field == "real":
        if np.any(V.imag != 0.0):
            raise ValueError("real-tagged frame has nonzero imaginary parts")
    elif field != "complex":
        raise ValueError(f"unknown field tag {field!r}")
    if np.linalg.matrix_rank(V) < n:
        raise RankDeficient("frame vectors do not span the ambient space")
    V = V.copy()
    V.setflags(write=False)
    return Frame(vectors=V, field=field)


def analysis(frame: Frame, x) -> np.ndarray:
    """Frame coefficients c_k = <x, f_k>."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (frame.n,):
        raise DimensionMismatch(f"expected vector of length {frame.n}, got {x.shape}")
    return frame.vectors.conj() @ x


def synthesis(frame: Frame, c) -> np.ndarray:
    """Adjoint of analysis: sum_k c_k f_k."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (frame.m,):
        raise DimensionMismatch(f"expected vector of length {frame.m}, got {c.shape}")
    return frame.vectors.T @ c


def magnitude_map(frame: Frame, x) -> MeasurementVector:
    """|<x, f_k>| for each frame vector; invariant to a global phase on x."""
    return MeasurementVector(np.abs(analysis(frame, x)), kind="magnitude")


def intensity_map(frame: Frame, x) -> MeasurementVector:
    """|<x, f_k>|^2 for each frame vector."""
    c = analysis(frame, x)
    return MeasurementVector((c * c.conj()).real, kind="intensity")


def frame_operator(frame: Frame) -> np.ndarray:
    """S = sum_k f_k f_k*."""
    V = frame.vectors
    return hermitian_part(V.T @ V.conj())


def frame_bounds(frame: Frame) -> tuple[float, float]:
    """Optimal frame bounds (A, B): extreme eigenvalues of the frame operator."""
    lam = hermitian_eig(frame_operator(frame)).eigenvalues
    return float(lam[-1]), float(lam[0])


def canonical_dual(frame: Frame) -> Frame:
    """Dual vectors S^{-1} f_k; satisfies sum_k <x, f_k> dual_k = x."""
    S = frame_operator(frame)
    duals = np.linalg.solve(S, frame.vectors.T).T
    if frame.is_real:
        duals = duals.real.astype(complex)
    return make_frame(duals, field=frame.field)


def is_full_spark(frame: Frame, tol: float = 1e-10, max_subsets: int = 10**6) -> bool:
    """True when every n-subset of the frame is linearly independent.

    Determinants are compared against tol times the product of the column
    norms (Hadamard scale), so the test is invariant to rescaling.
    """
    m, n = frame.m, frame.n
    if comb(m, n) > max_subsets:
        raise CombinatorialBudgetExceeded(
            f"C({m},{n}) = {comb(m, n)} subsets exceeds cap {max_subsets}"
        )
    V = frame.vectors
    norms = np.linalg.norm(V, axis=1)
    for idx in combinations(range(m), n):
        sub = V[list(idx), :]
        scale = float(np.prod(norms[list(idx)]))
        if scale == 0.0:
            return False
        if abs(np.linalg.det(sub)) <= tol * scale:
            return False
    return True


def random_frame(n: int, m: int, ensemble: str = "gaussian", seed=0) -> Frame:
    """Seeded random frame from one of three ensembles.

    "gaussian": entries N(0, 1/2) + i N(0, 1/2) (unit variance per entry).
    "uniform_sphere": gaussian rows rescaled to norm sqrt(n) exactly.
    "real_gaussian": real N(0, 1) entries, real-tagged.
    """
    if m < n:
        raise RankDeficient(f"need m >= n, got m={m}, n={n}")
    rng = rng_from_seed(seed)
    last_err = None
    for _ in range(3):
        if ensemble == "gaussian":
            V = rng.normal(0.0, np.sqrt(0.5), (m, n)) + 1j * rng.normal(0.0, np.sqrt(0.5), (m, n))
            field = "complex"
        elif ensemble == "uniform_sphere":
            V = rng.normal(0.0, np.sqrt(0.5), (m, n)) + 1j * rng.normal(0.0, np.sqrt(0.5), (m, n))
            V *= np.sqrt(n) / np.linalg.norm(V, axis=1, keepdims=True)
            field = "complex"
        elif ensemble == "real_gaussian":
            V = rng.normal(0.0, 1.0, (m, n)).astype(complex)
            field = "real"
        else:
            raise ValueError(f"unknown ensemble {ensemble!r}")
        try:
            return make_frame(V, field=field)
        except RankDeficient as exc:  # pragma: no cover - probability zero
            last_err = exc
    raise last_err  # pragma: no cover


def frame_to_dict(frame: Frame) -> dict:
    """JSON-ready dict: {"n", "m", "field", "vectors": [[[re, im], ...], ...]}."""
    return {
        "n": frame.n,
        "m": frame.m,
        "field": frame.field,
        "vectors": [[[float(z.real), float(z.imag)] for z in row] for row in frame.vectors],
    }


def frame_from_dict(data: dict) -> Frame:
    vecs = np.array(
        [[complex(re, im) for re, im in row] for row in data["vectors"]], dtype=complex
    )
    if vecs.shape != (data["m"], data["n"]):
        raise DimensionMismatch(
            f"vector table shape {vecs.shape} disagrees with header "
            f"(m={data['m']}, n={data['n']})"
        )
    return make_frame(vecs, field=data.get("field"))


def save_frame(frame: Frame, path) -> None:
    with open(path, "w") as fh:
        json.dump(frame_to_dict(frame), fh, indent=1)
        fh.write("\n")


def load_frame(path) -> Frame:
    with open(path) as fh:
        return frame_from_dict(json.load(fh))
