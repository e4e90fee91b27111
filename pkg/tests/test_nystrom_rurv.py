import numpy as np
import pytest

from gnystrom.approx import nystrom_spsd, rurv
from gnystrom.exceptions import ParameterError, SymmetryError
from gnystrom.sketch import gaussian, rng_from_seed
from gnystrom.testgen import POLY_FAST, POLY_SLOW, synth_dense, synth_spsd, synth_spsd_spectrum


def test_nystrom_exact_rank():
    a = synth_spsd(5, 80, seed=1)
    f = nystrom_spsd(a, gaussian(80, 5, seed=2))
    assert np.linalg.norm(a - f.materialize()) <= 1e-10 * np.linalg.norm(a)


def test_nystrom_full_sampling_reproduces_matrix():
    a, _ = synth_spsd_spectrum(POLY_FAST, 40, seed=3)
    f = nystrom_spsd(a, np.eye(40))
    assert np.linalg.norm(a - f.materialize()) <= 1e-10 * np.linalg.norm(a)


def test_nystrom_matches_formula():
    a, _ = synth_spsd_spectrum(POLY_SLOW, 60, seed=4)
    om = rng_from_seed(5).standard_normal((60, 8))
    w = a @ om
    ref = w @ np.linalg.pinv(om.T @ w) @ w.T
    got = nystrom_spsd(a, om).materialize()
    assert np.linalg.norm(got - ref) <= 1e-10 * np.linalg.norm(ref)


def test_nystrom_core_truncation_formula():
    a, _ = synth_spsd_spectrum(POLY_SLOW, 60, seed=6)
    om = rng_from_seed(7).standard_normal((60, 10))
    w, c = a @ om, om.T @ a @ om
    u, s, vt = np.linalg.svd(c)
    ck_pinv = vt[:4].T @ np.diag(1 / s[:4]) @ u[:, :4].T
    got = nystrom_spsd(a, om, truncate="core_k", k=4)
    assert got.rank_used == 4
    ref = w @ ck_pinv @ w.T
    assert np.linalg.norm(got.materialize() - ref) <= 1e-9 * np.linalg.norm(ref)


def test_nystrom_full_truncation_is_best_rank_k_of_approximant():
    a, _ = synth_spsd_spectrum(POLY_SLOW, 60, seed=8)
    om = rng_from_seed(9).standard_normal((60, 10))
    full = nystrom_spsd(a, om).materialize()
    u, s, vt = np.linalg.svd(full)
    ref = (u[:, :4] * s[:4]) @ vt[:4]
    got = nystrom_spsd(a, om, truncate="full_k", k=4).materialize()
    assert np.linalg.norm(got - ref) <= 1e-9 * np.linalg.norm(ref)


def test_nystrom_truncation_inequality_spectral_norm():
    for seed in range(10):
        a, _ = synth_spsd_spectrum(POLY_SLOW, 200, seed=seed)
        om = gaussian(200, 20, seed=100 + seed)
        full = nystrom_spsd(a, om, truncate="full_k", k=8).materialize()
        core = nystrom_spsd(a, om, truncate="core_k", k=8).materialize()
        assert np.linalg.norm(a - full, 2) <= np.linalg.norm(a - core, 2) * (1 + 1e-12)


def test_nystrom_rejects_asymmetric_and_bad_k():
    a = np.random.default_rng(0).standard_normal((10, 10))
    with pytest.raises(SymmetryError):
        nystrom_spsd(a, gaussian(10, 3, 0))
    with pytest.raises(SymmetryError):
        nystrom_spsd(np.ones((4, 5)), np.ones((5, 2)))
    s = a @ a.T
    with pytest.raises(ParameterError):
        nystrom_spsd(s, gaussian(10, 3, 0), truncate="core_k", k=4)
    with pytest.raises(ParameterError):
        nystrom_spsd(s, gaussian(10, 3, 0), truncate="best")


def test_nystrom_indefinite_core_does_not_fail():
    a = np.diag([3.0, 1.0, -2.0, 0.5])
    f = nystrom_spsd(a, np.eye(4)[:, :3] + 0.1)
    assert np.isfinite(f.materialize()).all()


def test_rurv_exact_factorization():
    a = np.random.default_rng(1).standard_normal((60, 60))
    f = rurv(a, seed=2)
    assert np.linalg.norm(f.reconstruct() - a) <= 1e-11 * np.linalg.norm(a)
    np.testing.assert_allclose(a @ f.v, f.u @ f.r, atol=1e-12)
    assert np.all(np.tril(f.r, -1) == 0)


def test_rurv_rectangular_sketch_limited():
    a = np.random.default_rng(3).standard_normal((40, 30))
    f = rurv(a, sketch_dim=10, seed=1)
    assert f.u.shape == (40, 10) and f.r.shape == (10, 10) and f.v.shape == (30, 10)
    np.testing.assert_allclose(a @ f.v, f.u @ f.r, atol=1e-12)
    with pytest.raises(ParameterError):
        rurv(a, sketch_dim=31)
    with pytest.raises(ParameterError):
        rurv(a, power_q=-1)


def test_rurv_rank_revealing():
    a, sigma = synth_dense(POLY_FAST, 300, seed=0)
    opt = np.sqrt(np.sum(sigma[10:] ** 2))
    plain = [np.linalg.norm(a - rurv(a, seed=s).truncated(10).materialize()) / opt
             for s in range(20)]
    # Without power iteration a single draw can approach the gate, so use the trial mean.
    assert np.mean(plain) <= 3
    for s in range(20):
        err = np.linalg.norm(a - rurv(a, power_q=1, seed=s).truncated(10).materialize())
        assert err <= 3 * opt


def test_rurv_power_iteration_improves_truncation():
    a, sigma = synth_dense(POLY_SLOW, 300, seed=1)
    e0 = [np.linalg.norm(a - rurv(a, seed=s).truncated(10).materialize()) for s in range(20)]
    e1 = [np.linalg.norm(a - rurv(a, power_q=1, seed=s).truncated(10).materialize())
          for s in range(20)]
    assert np.mean(e1) < np.mean(e0)
    with pytest.raises(ParameterError):
        rurv(a, sketch_dim=20, seed=0).truncated(21)
