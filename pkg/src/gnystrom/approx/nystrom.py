"""Classical Nystrom approximation of symmetric positive semidefinite matrices."""

import numpy as np

from ..exceptions import ParameterError, SymmetryError
from ..linalg import EPS, fro_norm, matmul, matmul_transA, qr_econ, svd
from ..sketch import SketchOperator
from .factors import LowRankFactors
from .schemes import truncated_pinv

TRUNCATIONS = ("none", "core_k", "full_k")


def _check_symmetric(a, rtol=1e-10):
    diff = a - a.T
    if fro_norm(diff) > rtol * fro_norm(a):
        raise SymmetryError("Nystrom approximation needs a symmetric matrix")


def nystrom_spsd(a, omega, truncate="none", k=None, eps_policy=64 * EPS):
    """Nystrom approximation ``W C^+ W^T`` with ``W = A Omega``, ``C = Omega^T A Omega``.

    ``omega`` is a :class:`SketchOperator` over ``n`` coordinates (the test
    matrix is its transpose) or an explicit ``n x r`` array.

    truncate:
        ``"none"``   -- ``W C^+ W^T``
        ``"core_k"`` -- ``W [C]_k^+ W^T``, the core truncated to rank ``k``
        ``"full_k"`` -- best rank-``k`` approximation of ``W C^+ W^T``, computed
        from the thin factorization ``W = QR``.
    """
    if truncate not in TRUNCATIONS:
        raise ParameterError(f"truncate must be one of {TRUNCATIONS}, got {truncate!r}")
    if a.shape[0] != a.shape[1]:
        raise SymmetryError(f"Nystrom approximation needs a square matrix, got {a.shape}")
    _check_symmetric(a)
    if isinstance(omega, SketchOperator):
        w = omega.right(a)
    else:
        w = matmul(a, np.asarray(omega, dtype=np.float64))
    r = w.shape[1]
    if truncate != "none" and (k is None or not 1 <= k <= r):
        raise ParameterError(f"truncation rank k must lie in [1, {r}], got {k}")
    c = omega.left(w) if isinstance(omega, SketchOperator) else matmul_transA(omega, w)
    c = 0.5 * (c + c.T)

    if truncate == "none":
        cinv, kept = truncated_pinv(c, eps_policy)
        return LowRankFactors(w, cinv, w.T, "nystrom", kept)

    if truncate == "core_k":
        u, s, vt = svd(c)
        keep = np.zeros(s.size, dtype=bool)
        keep[:k] = s[:k] > eps_policy * s[0] if s[0] > 0 else False
        cinv = (vt[keep].T / s[keep]) @ u[:, keep].T
        return LowRankFactors(w, cinv, w.T, "nystrom-core-k", int(keep.sum()))

    q, rf = qr_econ(w)
    cinv, _ = truncated_pinv(c, eps_policy)
    mid = rf @ cinv @ rf.T
    lam, vec = np.linalg.eigh(0.5 * (mid + mid.T))
    top = np.argsort(-np.abs(lam), kind="stable")[:k]
    basis = q @ vec[:, top]
    return LowRankFactors(basis, np.diag(lam[top]), basis.T, "nystrom-full-k", k)
