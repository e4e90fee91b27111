"""Randomized rank-revealing URV factorization."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import ParameterError
from ..linalg import matmul, matmul_transA, orth, qr_econ
from ..sketch import rng_from_seed
from .factors import LowRankFactors


@dataclass
class RurvFactors:
    """``A @ v = u @ r``; with a square ``v`` this is ``A = u @ r @ v.T``."""

    u: np.ndarray
    r: np.ndarray
    v: np.ndarray

    def reconstruct(self):
        return self.u @ self.r @ self.v.T

    def truncated(self, k):
        """``U[:, :k] R[:k, :] V^T`` as factors."""
        if not 1 <= k <= self.r.shape[0]:
            raise ParameterError(f"k must lie in [1, {self.r.shape[0]}], got {k}")
        return LowRankFactors(self.u[:, :k], None, self.r[:k] @ self.v.T, "rurv", k)


def rurv(a, sketch_dim=None, power_q=0, seed=0):
    """RURV: ``V = orth((A^T A)^q Omega)`` for Gaussian ``Omega``, then ``[U, R] = qr(A V)``.

    ``sketch_dim`` defaults to ``n`` (a full random orthogonal ``V``).
    """
    n = a.shape[1]
    c = n if sketch_dim is None else sketch_dim
    if not 1 <= c <= n:
        raise ParameterError(f"sketch_dim must lie in [1, n = {n}], got {c}")
    if power_q < 0:
        raise ParameterError(f"power_q must be >= 0, got {power_q}")
    z = rng_from_seed(seed).standard_normal((n, c))
    for _ in range(power_q):
        z = matmul_transA(a, matmul(a, orth(z)))
    v = orth(z)
    u, r = qr_econ(matmul(a, v))
    return RurvFactors(u, r, v)
