import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from gnystrom.exceptions import (
    DimensionError,
    IllConditionedTriangularError,
    InvalidInputError,
)
from gnystrom.linalg import (
    fro_norm,
    matmul,
    matmul_transA,
    matmul_transB,
    orth,
    pinv_eps,
    qr_econ,
    spmm,
    svd,
    tri_solve_upper,
    triangular_guard,
)
from gnystrom.testgen import POLY_SLOW, synth_dense


def test_qr_identity():
    q, r = qr_econ(np.eye(3))
    np.testing.assert_array_equal(q, np.eye(3))
    np.testing.assert_array_equal(r, np.eye(3))


def test_qr_three_four_five():
    q, r = qr_econ(np.array([[3.0], [4.0]]))
    assert r.shape == (1, 1)
    assert r[0, 0] == pytest.approx(5.0, rel=1e-15)
    np.testing.assert_allclose(q.ravel(), [0.6, 0.8], rtol=1e-15)


def test_qr_gaussian_residual():
    a = np.random.default_rng(0).standard_normal((50, 10))
    q, r = qr_econ(a)
    assert np.linalg.norm(q @ r - a) / np.linalg.norm(a) <= 1e-13
    assert np.all(np.tril(r, -1) == 0)
    assert np.all(np.diag(r) >= 0)


def test_qr_rejects_nonfinite():
    a = np.ones((3, 2))
    a[1, 1] = np.nan
    with pytest.raises(InvalidInputError):
        qr_econ(a)


def test_qr_wide_input():
    a = np.random.default_rng(1).standard_normal((3, 7))
    q, r = qr_econ(a)
    assert q.shape == (3, 3) and r.shape == (3, 7)
    np.testing.assert_allclose(q @ r, a, atol=1e-14)


@settings(max_examples=1000, deadline=None)
@given(m=st.integers(1, 300), n=st.integers(1, 300), seed=st.integers(0, 2**32 - 1))
def test_qr_invariants_random_shapes(m, n, seed):
    m, n = max(m, n), min(m, n)
    if m * n > 20000:
        n = max(1, 20000 // m)
    a = np.random.default_rng(seed).standard_normal((m, n))
    q, r = qr_econ(a)
    k = min(m, n)
    assert np.linalg.norm(q.T @ q - np.eye(k)) <= 1e-12 * np.sqrt(k)
    assert np.linalg.norm(q @ r - a) <= 1e-12 * np.linalg.norm(a)
    assert np.all(np.tril(r, -1) == 0)


def test_svd_diagonal():
    np.testing.assert_allclose(svd(np.diag([3.0, 2.0, 1.0])).sigma, [3, 2, 1], rtol=1e-15)


def test_svd_rank_one_scaling():
    u = np.array([2.0, 0.0, 0.0])
    v = np.array([0.0, 3.0, 0.0, 0.0])
    s = svd(np.outer(u, v)).sigma
    assert s[0] == pytest.approx(6.0, rel=1e-15)
    assert np.all(s[1:] <= 1e-15)


def test_svd_recovers_generator_spectrum():
    a, sigma = synth_dense(POLY_SLOW, 20, seed=3)
    np.testing.assert_allclose(svd(a).sigma, 1.0 / np.arange(1, 21), atol=1e-10)
    np.testing.assert_array_equal(sigma, 1.0 / np.arange(1, 21))


@settings(max_examples=200, deadline=None)
@given(m=st.integers(1, 60), n=st.integers(1, 60), seed=st.integers(0, 2**32 - 1))
def test_svd_roundtrip(m, n, seed):
    a = np.random.default_rng(seed).standard_normal((m, n))
    u, s, vt = svd(a)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    assert np.linalg.norm((u * s) @ vt - a) <= 1e-11 * np.linalg.norm(a)


def test_pinv_threshold_drops_tiny_value():
    np.testing.assert_array_equal(pinv_eps(np.diag([2.0, 1e-20]), 1e-10), np.diag([0.5, 0.0]))


def test_pinv_orthonormal_columns():
    q = orth(np.random.default_rng(2).standard_normal((9, 4)))
    np.testing.assert_allclose(pinv_eps(q, 0.0), q.T, atol=1e-14)


def test_pinv_all_dropped_is_zero():
    p = pinv_eps(np.full((3, 2), 1e-3), eps=1.0)
    assert p.shape == (2, 3) and not p.any()


def test_pinv_rejects_negative_eps():
    with pytest.raises(ValueError):
        pinv_eps(np.eye(2), -1.0)


@settings(max_examples=200, deadline=None)
@given(m=st.integers(1, 20), n=st.integers(1, 20), seed=st.integers(0, 2**32 - 1))
def test_pinv_moore_penrose_identities(m, n, seed):
    a = np.random.default_rng(seed).standard_normal((m, n))
    p = pinv_eps(a, 0.0)
    na = np.linalg.norm(a)
    tol = 1e-10 * max(na, 1.0) * max(np.linalg.norm(p), 1.0) ** 2
    assert np.linalg.norm(a @ p @ a - a) <= tol
    assert np.linalg.norm(p @ a @ p - p) <= tol
    assert np.linalg.norm((a @ p).T - a @ p) <= tol
    assert np.linalg.norm((p @ a).T - p @ a) <= tol


def test_pinv_8x5_identity():
    a = np.random.default_rng(4).standard_normal((8, 5))
    assert np.linalg.norm(a @ pinv_eps(a) @ a - a) <= 1e-11 * np.linalg.norm(a)


def test_tri_solve_identity():
    b = np.random.default_rng(5).standard_normal((4, 3))
    np.testing.assert_array_equal(tri_solve_upper(np.eye(4), b), b)


def test_tri_solve_hand_example():
    x = tri_solve_upper(np.array([[2.0, 1.0], [0.0, 4.0]]), np.array([[5.0], [8.0]]))
    np.testing.assert_allclose(x, [[1.5], [2.0]], rtol=1e-15)


def test_tri_solve_right_side():
    rng = np.random.default_rng(6)
    r = np.triu(rng.standard_normal((6, 6))) + 6 * np.eye(6)
    b = rng.standard_normal((10, 6))
    x = tri_solve_upper(r, b, side="right")
    assert np.linalg.norm(x @ r - b) <= 1e-12 * np.linalg.norm(b)


def test_tri_solve_residual_and_pinv_agreement():
    rng = np.random.default_rng(7)
    r = np.triu(rng.standard_normal((30, 30))) + 10 * np.eye(30)
    b = rng.standard_normal((30, 5))
    x = tri_solve_upper(r, b)
    assert np.linalg.norm(r @ x - b) <= 1e-12 * np.linalg.norm(b)
    ref = pinv_eps(r) @ b
    assert np.linalg.norm(x - ref) <= 1e-11 * np.linalg.norm(ref)


def test_tri_solve_guard_names_index():
    r = np.diag([1.0, 1.0, 1e-300, 1.0])
    assert triangular_guard(r) == 2
    with pytest.raises(IllConditionedTriangularError) as info:
        tri_solve_upper(r, np.ones((4, 1)))
    assert info.value.index == 2
    assert "index 2" in str(info.value)


def test_tri_solve_bad_side():
    with pytest.raises(ValueError):
        tri_solve_upper(np.eye(2), np.eye(2), side="middle")


def test_orth_cases():
    q = orth(np.random.default_rng(8).standard_normal((100, 10)))
    assert np.linalg.norm(q.T @ q - np.eye(10)) <= 1e-13
    np.testing.assert_array_equal(orth(2 * np.eye(3)), np.eye(3))
    q0 = orth(np.random.default_rng(9).standard_normal((7, 3)))
    np.testing.assert_allclose(np.abs(orth(q0)), np.abs(q0), atol=1e-14)
    with pytest.raises(DimensionError):
        orth(np.ones((2, 3)))


def test_products():
    rng = np.random.default_rng(10)
    b = rng.standard_normal((4, 3))
    np.testing.assert_array_equal(matmul(np.eye(4), b), b)
    u, v = rng.standard_normal((1, 5)), rng.standard_normal((5, 1))
    assert matmul(u, v)[0, 0] == pytest.approx((u @ v).item(), rel=1e-15)
    a = rng.standard_normal((6, 4))
    np.testing.assert_allclose(matmul_transA(a, a), a.T @ a, rtol=1e-14)
    np.testing.assert_allclose(matmul_transB(a, a), a @ a.T, rtol=1e-14)


def test_product_shape_errors_name_both_shapes():
    with pytest.raises(DimensionError, match=r"\(2, 3\).*\(2, 3\)"):
        matmul(np.ones((2, 3)), np.ones((2, 3)))
    with pytest.raises(DimensionError):
        matmul_transA(np.ones((2, 3)), np.ones((3, 3)))
    with pytest.raises(DimensionError):
        matmul_transB(np.ones((2, 3)), np.ones((3, 2)))


def test_spmm_matches_dense_oracle():
    rng = np.random.default_rng(11)
    s = sp.random_array((200, 200), density=0.01, format="csr", rng=rng)
    d = rng.standard_normal((200, 10))
    dense = s.toarray()
    np.testing.assert_allclose(spmm(s, d, "left"), dense @ d, atol=1e-13)
    np.testing.assert_allclose(spmm(s, d.T, "right"), d.T @ dense, atol=1e-13)
    np.testing.assert_allclose(matmul(s, d), dense @ d, atol=1e-13)
    with pytest.raises(DimensionError):
        spmm(s, np.ones((3, 2)))


def test_fro_norm_sparse_and_dense():
    a = sp.csr_array(np.array([[3.0, 0.0], [0.0, 4.0]]))
    assert fro_norm(a) == pytest.approx(5.0)
    assert fro_norm(a.toarray()) == pytest.approx(5.0)
