"""Dense and sparse kernels shared by every approximation scheme.

Dense matrices are plain 2-D ``float64`` numpy arrays; sparse matrices are
``scipy.sparse`` CSR arrays. Factorizations go through LAPACK (Householder
QR, divide-and-conquer SVD) with a fixed sign convention so that results are
deterministic for a given input.
"""

from collections import namedtuple

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import (
    DimensionError,
    FactorizationError,
    IllConditionedTriangularError,
    InvalidInputError,
)

EPS = np.finfo(np.float64).eps

QrEconResult = namedtuple("QrEconResult", ["q", "r"])
SvdResult = namedtuple("SvdResult", ["u", "sigma", "vt"])


def as_dense(a, name="a", check_finite=True):
    """Return ``a`` as a 2-D float64 array, rejecting NaN/Inf entries."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if check_finite and not np.isfinite(a).all():
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


def is_sparse(a):
    return sp.issparse(a)


def qr_econ(a):
    """Economy-size Householder QR, ``a = q @ r``.

    ``q`` has ``min(m, n)`` orthonormal columns. Column signs are fixed so
    that ``diag(r) >= 0``; in particular the identity factors as ``I @ I``.
    """
    a = as_dense(a)
    m, n = a.shape
    if m < 1 or n < 1:
        raise DimensionError(f"qr_econ needs a nonempty matrix, got {a.shape}")
    q, r = sla.qr(a, mode="economic", check_finite=False)
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    q *= signs
    r *= signs[:, None]
    return QrEconResult(q, r)


def orth(a):
    """Orthonormal basis for ``range(a)`` (Q-factor of :func:`qr_econ`)."""
    a = as_dense(a)
    if a.shape[1] > a.shape[0]:
        raise DimensionError(f"orth needs cols <= rows, got {a.shape}")
    return qr_econ(a).q


def svd(a, full_matrices=False):
    """Singular value decomposition with nonincreasing ``sigma``.

    Uses the divide-and-conquer driver and falls back to the QR-iteration
    driver when it does not converge.
    """
    a = as_dense(a)
    try:
        u, s, vt = sla.svd(a, full_matrices=full_matrices, check_finite=False,
                           lapack_driver="gesdd")
    except np.linalg.LinAlgError as first:
        try:
            u, s, vt = sla.svd(a, full_matrices=full_matrices,
                               check_finite=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as second:
            raise FactorizationError(
                f"SVD of {a.shape} matrix did not converge "
                f"(gesdd: {first}; gesvd: {second})"
            ) from second
    return SvdResult(u, s, vt)


def pinv_eps(a, eps=0.0):
    """Pseudo-inverse keeping only singular values strictly above ``eps``.

    Returns ``V1 @ diag(1/s1) @ U1.T``; if nothing survives the threshold the
    result is the zero matrix of transposed shape.
    """
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    a = as_dense(a)
    u, s, vt = svd(a)
    keep = s > eps
    return (vt[keep].T / s[keep]) @ u[:, keep].T


def triangular_guard(r):
    """Index of the first diagonal entry failing the conditioning guard, else None.

    The guard rejects ``min|r_ii| < n * eps * max|r_ii|``.
    """
    d = np.abs(np.diag(r))
    if d.size == 0:
        return None
    dmax = d.max()
    bad = np.flatnonzero(d < d.size * EPS * dmax) if dmax > 0 else np.arange(d.size)
    return int(bad[0]) if bad.size else None


def tri_solve_upper(r, b, side="left"):
    """Solve ``r @ x = b`` (``side="left"``) or ``x @ r = b`` (``side="right"``).

    ``r`` must be square upper triangular and pass :func:`triangular_guard`.
    """
    r = as_dense(r, "r")
    b = as_dense(b, "b")
    n = r.shape[0]
    if r.shape != (n, n):
        raise DimensionError(f"r must be square, got {r.shape}")
    bad = triangular_guard(r)
    if bad is not None:
        raise IllConditionedTriangularError(
            f"triangular factor is ill-conditioned at diagonal index {bad} "
            f"(|r_ii| = {abs(r[bad, bad]):.3e})", bad)
    if side == "left":
        if b.shape[0] != n:
            raise DimensionError(f"cannot solve {r.shape} @ x = {b.shape}")
        return sla.solve_triangular(r, b, lower=False, check_finite=False)
    if side == "right":
        if b.shape[1] != n:
            raise DimensionError(f"cannot solve x @ {r.shape} = {b.shape}")
        return sla.solve_triangular(r, b.T, trans="T", lower=False,
                                    check_finite=False).T
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _check_inner(a_shape, b_shape, ai, bi, what):
    if a_shape[ai] != b_shape[bi]:
        raise DimensionError(f"{what}: shapes {a_shape} and {b_shape} do not conform")


def matmul(a, b):
    """``a @ b``; either operand may be sparse (the result is dense)."""
    _check_inner(a.shape, b.shape, 1, 0, "matmul")
    return _dense_result(a @ b)


def matmul_transA(a, b):
    """``a.T @ b`` without forming ``a.T`` explicitly for dense inputs."""
    _check_inner(a.shape, b.shape, 0, 0, "matmul_transA")
    return _dense_result(a.T @ b)


def matmul_transB(a, b):
    """``a @ b.T``."""
    _check_inner(a.shape, b.shape, 1, 1, "matmul_transB")
    return _dense_result(a @ b.T)


def spmm(s, d, side="left"):
    """Sparse-times-dense product that never densifies ``s``.

    ``side="left"`` gives ``s @ d``, ``side="right"`` gives ``d @ s``.
    """
    s = sp.csr_array(s)
    d = as_dense(d, "d", check_finite=False)
    if side == "left":
        _check_inner(s.shape, d.shape, 1, 0, "spmm")
        return np.asarray(s @ d)
    if side == "right":
        _check_inner(d.shape, s.shape, 1, 0, "spmm")
        # d @ s == (s.T @ d.T).T; s.T of a CSR array is a CSC view.
        return np.asarray(s.T @ d.T).T
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _dense_result(x):
    if sp.issparse(x):
        x = x.toarray()
    return np.asarray(x, dtype=np.float64)


def fro_norm(a):
    if sp.issparse(a):
        return float(spla.norm(a, "fro"))
    return float(np.linalg.norm(a))
