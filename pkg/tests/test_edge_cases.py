"""Edge cases and contract checks that cut across modules."""

import numpy as np
import pytest

from framepr import (
    GSOptions,
    IRLSOptions,
    MeasurementVector,
    PhaseLiftOptions,
    WirtingerOptions,
    cg_solve,
    gerchberg_saxton,
    hermitian_eig,
    intensity_map,
    lifted_linear,
    lifted_map,
    load_frame,
    make_frame,
    pseudo_inverse,
    quotient_distance,
    random_frame,
    run_experiment,
    save_frame,
    wirtinger_flow,
)
from conftest import random_complex


def test_options_validation():
    with pytest.raises(ValueError):
        PhaseLiftOptions(lambda_decay=1.5)
    with pytest.raises(ValueError):
        PhaseLiftOptions(fit="huber")
    with pytest.raises(ValueError):
        GSOptions(max_iter=0)
    with pytest.raises(ValueError):
        WirtingerOptions(mu_max=0.0)
    with pytest.raises(ValueError):
        IRLSOptions(rho=1.0)
    with pytest.raises(ValueError):
        IRLSOptions(eps=-1.0)


def test_measurement_vector_array_protocol():
    mv = MeasurementVector(np.array([1.0, 2.0]), kind="intensity")
    assert len(mv) == 2
    np.testing.assert_array_equal(np.asarray(mv), [1.0, 2.0])
    assert float(np.sum(mv)) == 3.0


def test_real_frame_json_roundtrip(tmp_path):
    frame = random_frame(3, 7, "real_gaussian", seed=5)
    path = tmp_path / "real.json"
    save_frame(frame, path)
    loaded = load_frame(path)
    assert loaded.is_real
    np.testing.assert_array_equal(loaded.vectors, frame.vectors)


def test_cg_complex_hermitian(rng):
    B = random_complex(rng, 36).reshape(6, 6)
    A = B @ B.conj().T + 4 * np.eye(6)
    b = random_complex(rng, 6)
    x, ok, _ = cg_solve(lambda v: A @ v, b, tol=1e-12)
    assert ok
    np.testing.assert_allclose(x, np.linalg.solve(A, b), atol=1e-9)


def test_pseudo_inverse_indefinite(rng):
    # negative eigenvalues are inverted, not clipped
    M = np.diag([2.0, -0.5, 0.0])
    np.testing.assert_allclose(pseudo_inverse(M), np.diag([0.5, -2.0, 0.0]), atol=1e-14)


def test_quotient_distance_general_p_bracket(rng):
    # refined minimum sits within grid accuracy below the 1e4-point grid value
    x, y = random_complex(rng, 3), random_complex(rng, 3)
    phis = np.linspace(0.0, 2 * np.pi, 10**4, endpoint=False)
    grid = min(np.linalg.norm(x - np.exp(1j * p) * y, ord=1) for p in phis)
    val = quotient_distance(x, y, 1)
    assert grid - 1e-5 <= val <= grid + 1e-9


def test_lifted_linear_negative_measurements():
    # heavily negative (noisy) measurements can push the top eigenvalue below
    # zero: the least-squares estimate falls back to 0
    frame = random_frame(2, 6, "gaussian", seed=31)
    y = -lifted_map(frame, np.eye(2))
    result = lifted_linear(frame, y)
    np.testing.assert_array_equal(result.diagnostics["x_ls"], np.zeros(2))


def test_wirtinger_zero_start():
    frame = random_frame(2, 8, "gaussian", seed=32)
    y = intensity_map(frame, np.array([1.0, 1j]))
    result = wirtinger_flow(frame, y, WirtingerOptions(x0=np.zeros(2)))
    np.testing.assert_array_equal(result.x_hat, np.zeros(2))
    assert result.converged


def test_gs_zero_start():
    frame = random_frame(2, 8, "gaussian", seed=33)
    x = np.array([1.0, 1j]) / np.sqrt(2)
    result = gerchberg_saxton(frame, intensity_map(frame, x), np.zeros(2))
    assert np.isfinite(result.residual)
    assert np.linalg.norm(result.x_hat) > 0  # first sweep leaves the origin


def test_harness_inline_frame_and_signal_norm():
    config = {
        "task": "reconstruct",
        "frame": {
            "inline": {
                "n": 1,
                "m": 2,
                "field": "complex",
                "vectors": [[[1, 0]], [[0, 1]]],
            }
        },
        "signal": {"kind": "gaussian", "norm": 2.0},
        "trials": 2,
        "seed": 7,
        "algorithms": [{"name": "lifted_linear"}],
    }
    report = run_experiment(config)
    for rec in report.records:
        assert rec["d2_error"] <= 1e-8
        # the relative error is normalized by the requested signal norm
        assert rec["d2_rel"] == pytest.approx(rec["d2_error"] / 2.0)


def test_harness_sweep_rho():
    config = {
        "task": "sweep",
        "frame": {"ensemble": "gaussian", "n": 2, "m": 6, "seed": 8},
        "noise": {"kind": "coefficient"},
        "sweep": {"parameter": "rho", "values": [0.01, 0.2]},
        "trials": 3,
        "seed": 9,
        "algorithms": [{"name": "lifted_linear"}],
    }
    report = run_experiment(config)
    rows = {row["noise_level"]: row["d2_rel_mean"] for row in report.tables}
    assert rows[0.01] < rows[0.2]


def test_hermitian_eig_scalar_matrix():
    dec = hermitian_eig(np.array([[3.5]]))
    assert dec.eigenvalues[0] == 3.5
    assert abs(dec.eigenvectors[0, 0]) == 1.0


def test_make_frame_rejects_nonfinite():
    with pytest.raises(ValueError):
        make_frame([[np.nan, 0], [0, 1], [1, 1]])
    with pytest.raises(ValueError):
        make_frame(np.array([[1, 1j], [0, 1]]), field="real")
