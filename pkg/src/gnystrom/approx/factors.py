"""Factored low-rank output, scheme configuration and error evaluation."""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..exceptions import DegenerateInputError, DimensionError, ParameterError
from ..linalg import EPS, fro_norm
from ..sketch import KINDS, rng_from_seed

# Column block width used when streaming the residual of a sparse matrix.
BLOCK_WIDTH = 256


@dataclass
class LowRankFactors:
    """``A_hat = left @ core @ right_t``; ``core=None`` stands for the identity."""

    left: np.ndarray
    core: np.ndarray | None
    right_t: np.ndarray
    scheme: str
    rank_used: int

    def __post_init__(self):
        k = self.left.shape[1]
        if self.right_t.shape[0] != k or (
                self.core is not None and self.core.shape != (k, k)):
            core_shape = "identity" if self.core is None else self.core.shape
            raise DimensionError(
                f"factor shapes do not conform: left {self.left.shape}, "
                f"core {core_shape}, right_t {self.right_t.shape}")

    @property
    def shape(self):
        return (self.left.shape[0], self.right_t.shape[1])

    def core_or_identity(self):
        if self.core is None:
            return np.eye(self.left.shape[1])
        return self.core

    def inner_right(self):
        """``core @ right_t`` (an ``r x n`` block)."""
        return self.right_t if self.core is None else self.core @ self.right_t

    def materialize(self):
        """Dense ``m x n`` approximant. Test-scale matrices only."""
        return self.left @ self.inner_right()

    def matvec(self, x):
        return self.left @ (self.inner_right() @ x)

    def rmatvec(self, y):
        return self.inner_right().T @ (self.left.T @ y)


@dataclass
class ApproxConfig:
    """Parameters shared by the approximation schemes.

    ``oversampling=None`` selects the GN default ``max(2, ceil(r/2))``; GN
    needs ``l >= 2``. ``eps_policy`` is the relative threshold of
    the epsilon-pseudo-inverse: singular values of a core matrix at or below
    ``eps_policy * sigma_max(core)`` are dropped.
    """

    rank: int
    oversampling: int | None = None
    power_q: int = 0
    eps_policy: float = 64 * EPS
    seed: int = 0
    sketch_kind: str = "gaussian"
    zeta: int | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise ParameterError(f"rank must be >= 1, got {self.rank}")
        if self.power_q < 0:
            raise ParameterError(f"power_q must be >= 0, got {self.power_q}")
        if self.eps_policy < 0:
            raise ParameterError(f"eps_policy must be >= 0, got {self.eps_policy}")
        if self.sketch_kind not in KINDS:
            raise ParameterError(f"unknown sketch kind {self.sketch_kind!r}")

    def gn_oversampling(self):
        if self.oversampling is None:
            return max(2, math.ceil(0.5 * self.rank))
        return self.oversampling


def relative_error(a, factors):
    """``||A - L M Rt||_F / ||A||_F`` without forming the full approximant.

    The residual is streamed in column blocks of :data:`BLOCK_WIDTH`; a sparse
    ``A`` is only ever densified one block at a time.
    """
    if a.shape != factors.shape:
        raise DimensionError(f"factors of shape {factors.shape} do not match A {a.shape}")
    norm_a = fro_norm(a)
    if norm_a == 0:
        raise DegenerateInputError("relative error undefined for a zero matrix")
    if sp.issparse(a):
        a = sp.csc_array(a)
    left, inner = factors.left, factors.inner_right()
    total = 0.0
    for j in range(0, a.shape[1], BLOCK_WIDTH):
        block = a[:, j:j + BLOCK_WIDTH]
        block = block.toarray() if sp.issparse(block) else block
        total += float(np.sum((block - left @ inner[:, j:j + BLOCK_WIDTH]) ** 2))
    return math.sqrt(total) / norm_a


def dense_relative_error(a, factors):
    """Reference path: materializes both matrices. Test scale only."""
    a = a.toarray() if sp.issparse(a) else np.asarray(a)
    return float(np.linalg.norm(a - factors.materialize()) / np.linalg.norm(a))


def spectral_error(a, factors, max_iter=500, tol=1e-12, seed=0):
    """Estimate ``||A - A_hat||_2`` by power iteration on ``E^T E``.

    ``E`` is applied through matrix-vector products only.
    """
    m, n = a.shape
    x = rng_from_seed(seed).standard_normal(n)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(max_iter):
        ex = np.asarray(a @ x).ravel() - factors.matvec(x)
        y = np.asarray(a.T @ ex).ravel() - factors.rmatvec(ex)
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0
        new = math.sqrt(ny)
        x = y / ny
        if abs(new - est) <= tol * new:
            est = new
            break
        est = new
    ex = np.asarray(a @ x).ravel() - factors.matvec(x)
    return max(est, float(np.linalg.norm(ex)))
