import numpy as np
import pytest

from framepr import (
    align_phase,
    hermitian_eig,
    lift_outer,
    lift_outer_normalized,
    outer_distance,
    quotient_distance,
)
from conftest import random_complex


def grid_min(x, y, p, grid=10**4):
    phis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    return min(np.linalg.norm(x - np.exp(1j * phi) * y, ord=p) for phi in phis)


def test_quotient_distance_same_class():
    e1 = np.eye(2, dtype=complex)[0]
    assert quotient_distance(e1, 1j * e1, 2) == 0.0


def test_quotient_distance_orthogonal():
    e = np.eye(2, dtype=complex)
    assert quotient_distance(e[0], e[1], 2) == pytest.approx(np.sqrt(2.0))


def test_quotient_distance_matches_grid(rng):
    for _ in range(10):
        x, y = random_complex(rng, 3), random_complex(rng, 3)
        assert quotient_distance(x, y, 2) == pytest.approx(grid_min(x, y, 2), abs=1e-6)


@pytest.mark.parametrize("p", [1, np.inf])
def test_quotient_distance_other_p(rng, p):
    for _ in range(8):
        x, y = random_complex(rng, 3), random_complex(rng, 3)
        assert quotient_distance(x, y, p) <= grid_min(x, y, p) + 1e-9


def test_outer_distance_examples():
    e = np.eye(2, dtype=complex)
    assert outer_distance(e[0], e[1], 1) == pytest.approx(2.0)
    x = np.array([0.3 - 1j, 2.0 + 0.5j])
    for p in (1, 2, np.inf):
        assert outer_distance(x, np.exp(0.7j) * x, p) == pytest.approx(0.0, abs=1e-12)


def test_outer_distance_vs_eigensolver(rng):
    for _ in range(20):
        x, y = random_complex(rng, 4), random_complex(rng, 4)
        lam = hermitian_eig(lift_outer(x) - lift_outer(y)).eigenvalues
        scale = max(1.0, np.abs(lam).max())
        assert abs(outer_distance(x, y, 1) - np.abs(lam).sum()) < 1e-10 * scale
        assert abs(outer_distance(x, y, 2) - np.linalg.norm(lam)) < 1e-10 * scale
        assert abs(outer_distance(x, y, np.inf) - np.abs(lam).max()) < 1e-10 * scale


def _metric_axioms(dist, pts, tol=1e-10):
    for a in pts:
        assert dist(a, a) <= tol
        for b in pts:
            assert abs(dist(a, b) - dist(b, a)) <= tol
            for c in pts:
                assert dist(a, c) <= dist(a, b) + dist(b, c) + tol


def test_metric_axioms(rng):
    pts = [random_complex(rng, 3) for _ in range(4)]
    _metric_axioms(lambda a, b: quotient_distance(a, b, 2), pts)
    for p in (1, 2, np.inf):
        _metric_axioms(lambda a, b, p=p: outer_distance(a, b, p), pts)


def test_identity_of_indiscernibles_class_level(rng):
    x = random_complex(rng, 4)
    y = np.exp(1.234j) * x
    assert quotient_distance(x, y, 2) <= 1e-10
    assert outer_distance(x, y, 1) <= 1e-10
    z = random_complex(rng, 4)
    assert quotient_distance(x, z, 2) > 1e-6


@pytest.mark.parametrize("p,q", [(1, 2), (2, 1), (2, np.inf), (np.inf, 2), (1, np.inf)])
def test_quotient_distance_norm_equivalence(rng, p, q):
    # D_q <= max(1, n^(1/q - 1/p)) D_p
    n = 4
    inv = lambda r: 0.0 if r == np.inf else 1.0 / r
    const = max(1.0, n ** (inv(q) - inv(p)))
    for _ in range(10):
        x, y = random_complex(rng, n), random_complex(rng, n)
        assert quotient_distance(x, y, q) <= const * quotient_distance(x, y, p) + 1e-8


@pytest.mark.parametrize("p,q", [(1, 2), (2, 1), (2, np.inf), (np.inf, 1)])
def test_outer_distance_norm_equivalence(rng, p, q):
    # d_q <= max(1, 2^(1/q - 1/p)) d_p: rank <= 2 matrices
    inv = lambda r: 0.0 if r == np.inf else 1.0 / r
    const = max(1.0, 2.0 ** (inv(q) - inv(p)))
    for _ in range(10):
        x, y = random_complex(rng, 4), random_complex(rng, 4)
        assert outer_distance(x, y, q) <= const * outer_distance(x, y, p) + 1e-10


def test_normalized_lift_is_bilipschitz(rng):
    # D2 <= ||k(x) - k(y)||_2 <= sqrt(2) D2
    for _ in range(30):
        x, y = random_complex(rng, 3), random_complex(rng, 3)
        d = quotient_distance(x, y, 2)
        k = np.linalg.norm(lift_outer_normalized(x) - lift_outer_normalized(y))
        assert d - 1e-9 <= k <= np.sqrt(2.0) * d + 1e-9


def test_align_phase_same_class(rng):
    ref = random_complex(rng, 4)
    aligned, err = align_phase(1j * ref, ref)
    np.testing.assert_allclose(aligned, ref, atol=1e-12)
    assert err <= 1e-12


def test_align_phase_orthogonal():
    e = np.eye(2, dtype=complex)
    est = 2.0 * e[1]
    aligned, err = align_phase(est, e[0])
    np.testing.assert_array_equal(aligned, est)  # phase 0 when <ref, est> = 0
    assert err == pytest.approx(np.sqrt(1.0 + 4.0))


def test_align_phase_is_quotient_distance(rng):
    for _ in range(20):
        est, ref = random_complex(rng, 5), random_complex(rng, 5)
        _, err = align_phase(est, ref)
        assert err == pytest.approx(quotient_distance(est, ref, 2), abs=1e-12)
        assert err <= grid_min(ref, est, 2) + 1e-6
