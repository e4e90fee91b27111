"""Randomized low-rank schemes for general (nonsymmetric) matrices.

All schemes return :class:`LowRankFactors`; none forms the ``m x n``
approximant. ``a`` may be a dense array or a scipy sparse matrix.

Test matrices are drawn from ``config.seed``: ``X`` (right sketch) from child
stream 0 and ``Y`` (left sketch) from child stream 1, so schemes run with the
same seed share the same ``X``. The keyword arguments ``x``/``y`` inject
explicit test matrices instead.
"""

import numpy as np

from ..exceptions import IllConditionedTriangularError, ParameterError
from ..linalg import matmul, matmul_transA, orth, qr_econ, svd, tri_solve_upper, triangular_guard
from ..sketch import derive_seed, make
from .factors import LowRankFactors

SCHEMES = ("rsvd", "gn", "gn-stabilized", "gn-rc", "gn-c")


def _check_rank(r, a, extra=0, what="r"):
    m, n = a.shape
    if r < 1 or r + extra > min(m, n):
        raise ParameterError(f"{what} = {r + extra} must lie in [1, min(m, n) = {min(m, n)}]")


def _sketch_right(a, config, cols, x):
    """``A @ X`` with ``X`` an ``n x cols`` test matrix (stream 0)."""
    if x is not None:
        return matmul(a, np.asarray(x, dtype=np.float64))
    op = make(config.sketch_kind, a.shape[1], cols, derive_seed(config.seed, 0), config.zeta)
    return op.right(a)


def _sketch_left(a, config, cols, y):
    """``Y.T @ A`` with ``Y`` an ``m x cols`` test matrix (stream 1)."""
    if y is not None:
        return matmul_transA(np.asarray(y, dtype=np.float64), a)
    op = make(config.sketch_kind, a.shape[0], cols, derive_seed(config.seed, 1), config.zeta)
    return op.left(a)


def truncated_pinv(core, eps_policy):
    """Epsilon-pseudo-inverse with ``eps = eps_policy * sigma_max(core)``.

    Returns ``(pinv, kept)`` where ``kept`` counts the retained singular values.
    """
    u, s, vt = svd(core)
    if s.size == 0 or s[0] == 0:
        return np.zeros(core.shape[::-1]), 0
    keep = s > eps_policy * s[0]
    return (vt[keep].T / s[keep]) @ u[:, keep].T, int(keep.sum())


def rsvd(a, config, x=None):
    """Randomized SVD: ``Q = orth(A X)``, ``A_hat = (Q U0) S0 V0^T`` from ``svd(Q^T A)``.

    With ``config.power_q = q > 0`` the range is taken from ``(A A^T)^q A X``,
    re-orthonormalizing after every product.
    """
    r = config.rank
    _check_rank(r, a)
    y = _sketch_right(a, config, r, x)
    for _ in range(config.power_q):
        z = orth(matmul_transA(a, orth(y)))
        y = matmul(a, z)
    q = orth(y)
    b = matmul_transA(a, q).T
    u0, s0, v0t = svd(b)
    return LowRankFactors(q @ u0, np.diag(s0), v0t, "rsvd", r)


def gn(a, config, x=None, y=None):
    """Generalized Nystrom: ``A_hat = ((A X) R^{-1}) (Q^T (Y^T A))``.

    ``X`` is ``n x r`` and ``Y`` is ``m x (r + l)``; ``Q R`` is the economy QR
    of the core ``Y^T A X``. Raises :class:`IllConditionedTriangularError`
    when ``R`` fails the conditioning guard.
    """
    r = config.rank
    if x is None or y is None:
        l = config.gn_oversampling()
        if l < 2:
            raise ParameterError(f"GN needs oversampling l >= 2, got {l}")
        _check_rank(r, a, extra=l, what="r + l")
    else:
        l = np.shape(y)[1] - r
    ax = _sketch_right(a, config, r, x)
    yta = _sketch_left(a, config, r + l, y)
    core = _core(yta, ax, config, x)
    q, rf = qr_econ(core)
    try:
        left = tri_solve_upper(rf, ax, side="right")
    except IllConditionedTriangularError as exc:
        raise IllConditionedTriangularError(
            f"{exc}; the GN core is numerically rank deficient, use gn_stabilized",
            exc.index) from exc
    return LowRankFactors(left, None, q.T @ yta, "gn", r)


def _core(yta, ax, config, x):
    # Y^T A X, reusing Y^T A and the same right sketch as A X.
    if x is not None:
        return yta @ np.asarray(x, dtype=np.float64)
    op = make(config.sketch_kind, yta.shape[1], ax.shape[1], derive_seed(config.seed, 0),
              config.zeta)
    return op.right(yta)


def gn_stabilized(a, config, x=None, y=None):
    """Stabilized GN: ``(A X) pinv_eps(Y^T A X) (Y^T A)``.

    Singular values of the core at or below ``eps_policy * sigma_max`` are
    dropped, so ``rank_used`` may fall below ``r``.
    """
    r = config.rank
    if x is None or y is None:
        l = config.gn_oversampling()
        if l < 2:
            raise ParameterError(f"GN needs oversampling l >= 2, got {l}")
        _check_rank(r, a, extra=l, what="r + l")
    else:
        l = np.shape(y)[1] - r
    ax = _sketch_right(a, config, r, x)
    yta = _sketch_left(a, config, r + l, y)
    u, s, vt = svd(_core(yta, ax, config, x))
    keep = s > config.eps_policy * s[0] if s[0] > 0 else np.zeros(s.size, dtype=bool)
    return LowRankFactors(ax @ vt[keep].T, np.diag(1.0 / s[keep]), u[:, keep].T @ yta,
                          "gn-stabilized", int(keep.sum()))


def gn_rc(a, config, x=None, y=None, branch="column"):
    """GN with row and column sketching.

    ``Q1 = orth(A X)``, ``Q2 = orth(A^T Y)``. The default ``branch="column"``
    factors ``A Q2 = Qt Rt`` and returns
    ``(A Q2) pinv(Rt) (Qt^T Q1) (A^T Q1)^T``; ``branch="row"`` factors
    ``A^T Q1 = Qh Rh`` and returns ``(A Q2) (Q2^T Qh) pinv(Rh^T) (A^T Q1)^T``.
    """
    r = config.rank
    _check_rank(r, a)
    q1 = orth(_sketch_right(a, config, r, x))
    q2 = orth(_sketch_left(a, config, r, y).T)
    aq2 = matmul(a, q2)
    atq1 = matmul_transA(a, q1)
    if branch == "column":
        qt, rt = qr_econ(aq2)
        rinv, kept = truncated_pinv(rt, config.eps_policy)
        core = rinv @ (qt.T @ q1)
    elif branch == "row":
        qh, rh = qr_econ(atq1)
        rinv, kept = truncated_pinv(rh.T, config.eps_policy)
        core = (q2.T @ qh) @ rinv
    else:
        raise ParameterError(f"branch must be 'column' or 'row', got {branch!r}")
    return LowRankFactors(aq2, core, atq1.T, "gn-rc", kept)


def gn_c(a, config, x=None):
    """GN with column sketching only.

    ``[Q1, R1] = qr(A X)``, ``[Qh, Rh] = qr(A^T Q1)`` and
    ``A_hat = (A Qh) (Rh^T)^{-1} (A^T Q1)^T``. The inverse comes from a guarded
    triangular solve and falls back to the epsilon-pseudo-inverse when the
    guard trips.
    """
    r = config.rank
    _check_rank(r, a)
    q1 = qr_econ(_sketch_right(a, config, r, x)).q
    atq1 = matmul_transA(a, q1)
    qh, rh = qr_econ(atq1)
    if triangular_guard(rh) is None:
        core = tri_solve_upper(rh, np.eye(rh.shape[0])).T
        kept = rh.shape[0]
    else:
        core, kept = truncated_pinv(rh.T, config.eps_policy)
    return LowRankFactors(matmul(a, qh), core, atq1.T, "gn-c", kept)


def run_scheme(name, a, config):
    """Dispatch by scheme name (one of :data:`SCHEMES`)."""
    try:
        fn = {"rsvd": rsvd, "gn": gn, "gn-stabilized": gn_stabilized,
              "gn-rc": gn_rc, "gn-c": gn_c}[name]
    except KeyError:
        raise ParameterError(f"unknown scheme {name!r}; expected one of {SCHEMES}") from None
    return fn(a, config)
