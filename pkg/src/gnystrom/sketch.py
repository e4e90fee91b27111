"""Seeded random sketching operators.

Every operator is an ``s x m`` map ``S`` (``s = sketch_dim``, ``m = input_dim``)
and is applied either from the left (``S @ A``) or, as a test matrix, from the
right (``A @ S.T``; the ``n x r`` test matrices ``X``, ``Y``, ``Omega`` of the
approximation schemes are ``S.T``).

Randomness: the operator seed keys a ``SeedSequence``; each random component
(matrix entries, positions, signs, sampled rows) reads its own spawned child
stream through a Philox counter-based generator, so operators are
reproducible across platforms and independent of generation order.
"""

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft
import scipy.sparse as sp

from .exceptions import DimensionError, ParameterError

KINDS = ("gaussian", "sparse_sign", "srtt", "column_sampling")

# Column block width for transforms applied to sparse inputs.
_BLOCK = 256


def rng_from_seed(seed, stream=0, n_streams=1):
    """Philox generator for child ``stream`` of ``seed``'s seed sequence."""
    child = np.random.SeedSequence(int(seed)).spawn(n_streams)[stream]
    return np.random.Generator(np.random.Philox(child))


def derive_seed(seed, index):
    """Deterministic 64-bit child seed ``index`` of ``seed``."""
    child = np.random.SeedSequence(int(seed)).spawn(index + 1)[index]
    return int(child.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class SketchOperator:
    kind: str
    input_dim: int
    sketch_dim: int
    seed: int
    zeta: int | None = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown sketch kind {self.kind!r}; expected one of {KINDS}")
        if not 1 <= self.sketch_dim <= self.input_dim:
            raise DimensionError(
                f"need 1 <= sketch_dim <= input_dim, got sketch_dim={self.sketch_dim}, "
                f"input_dim={self.input_dim}")
        if self.kind == "sparse_sign":
            if self.zeta is None:
                object.__setattr__(self, "zeta", min(self.sketch_dim, 8))
            if not 1 <= self.zeta <= self.sketch_dim:
                raise ParameterError(
                    f"zeta must lie in [1, sketch_dim={self.sketch_dim}], got {self.zeta}")
        elif self.zeta is not None:
            raise ParameterError(f"zeta only applies to sparse_sign sketches, not {self.kind}")

    @property
    def shape(self):
        return (self.sketch_dim, self.input_dim)

    # -- payloads, built on first use ---------------------------------------

    @cached_property
    def gaussian_matrix(self):
        s, m = self.shape
        return rng_from_seed(self.seed).standard_normal((s, m)) / math.sqrt(s)

    @cached_property
    def sparse_matrix(self):
        """CSR form of the sparse sign map, nonzeros ``+-1/sqrt(zeta)``."""
        s, m = self.shape
        z = self.zeta
        pos_rng = rng_from_seed(self.seed, 0, 2)
        sign_rng = rng_from_seed(self.seed, 1, 2)
        # zeta distinct rows per column: smallest zeta of s uniform keys.
        keys = pos_rng.random((m, s))
        rows = np.sort(np.argpartition(keys, z - 1, axis=1)[:, :z], axis=1)
        signs = np.where(sign_rng.random((m, z)) < 0.5, -1.0, 1.0)
        cols = np.repeat(np.arange(m), z)
        mat = sp.csc_array((signs.ravel() / math.sqrt(z), (rows.ravel(), cols)), shape=(s, m))
        return sp.csr_array(mat)

    @cached_property
    def srtt_signs(self):
        return np.where(rng_from_seed(self.seed, 0, 2).random(self.input_dim) < 0.5, -1.0, 1.0)

    @cached_property
    def sampled_indices(self):
        """Sorted distinct indices (SRTT restriction or sampled columns)."""
        stream, n_streams = (1, 2) if self.kind == "srtt" else (0, 1)
        rng = rng_from_seed(self.seed, stream, n_streams)
        return np.sort(rng.choice(self.input_dim, self.sketch_dim, replace=False))

    # -- application --------------------------------------------------------

    def _srtt_columns(self, x):
        """``S @ x`` for a dense ``m x k`` block ``x``."""
        m, s = self.input_dim, self.sketch_dim
        y = scipy.fft.dct(x * self.srtt_signs[:, None], type=2, norm="ortho", axis=0)
        return math.sqrt(m / s) * y[self.sampled_indices]

    def left(self, a):
        """``S @ a`` for dense or sparse ``a`` with ``input_dim`` rows."""
        if a.shape[0] != self.input_dim:
            raise DimensionError(f"cannot apply {self.shape} sketch to {a.shape} from the left")
        sparse = sp.issparse(a)
        if self.kind == "gaussian":
            g = self.gaussian_matrix
            return np.asarray((a.T @ g.T).T) if sparse else g @ a
        if self.kind == "sparse_sign":
            out = self.sparse_matrix @ a
            return out.toarray() if sp.issparse(out) else np.asarray(out)
        if self.kind == "column_sampling":
            out = a[self.sampled_indices, :]
            return out.toarray() if sp.issparse(out) else np.array(out, dtype=np.float64)
        if not sparse:
            return self._srtt_columns(np.asarray(a, dtype=np.float64))
        a = sp.csc_array(a)
        blocks = [self._srtt_columns(a[:, j:j + _BLOCK].toarray())
                  for j in range(0, a.shape[1], _BLOCK)]
        return np.hstack(blocks) if blocks else np.zeros((self.sketch_dim, 0))

    def right(self, a):
        """``a @ S.T`` for dense or sparse ``a`` with ``input_dim`` columns."""
        if a.shape[1] != self.input_dim:
            raise DimensionError(f"cannot apply {self.shape} sketch to {a.shape} from the right")
        if self.kind == "column_sampling":
            out = a[:, self.sampled_indices]
            return out.toarray() if sp.issparse(out) else np.array(out, dtype=np.float64)
        if self.kind == "gaussian":
            return np.asarray(a @ self.gaussian_matrix.T)
        return self.left(a.T).T

    def dense(self):
        """Materialize ``S`` as an ``s x m`` array (test scale only)."""
        return self.left(np.eye(self.input_dim))

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        return {"kind": self.kind, "input_dim": self.input_dim,
                "sketch_dim": self.sketch_dim, "seed": self.seed, "zeta": self.zeta}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], int(d["input_dim"]), int(d["sketch_dim"]), int(d["seed"]),
                   None if d.get("zeta") is None else int(d["zeta"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def gaussian(input_dim, sketch_dim, seed):
    """Gaussian embedding with iid ``N(0, 1/sketch_dim)`` entries."""
    return SketchOperator("gaussian", input_dim, sketch_dim, seed)


def sparse_sign(input_dim, sketch_dim, zeta=None, seed=0):
    """Sparse sign map: each column has exactly ``zeta`` nonzeros ``+-1/sqrt(zeta)``.

    ``zeta`` defaults to ``min(sketch_dim, 8)``.
    """
    return SketchOperator("sparse_sign", input_dim, sketch_dim, seed, zeta)


def srtt(input_dim, sketch_dim, seed):
    """Subsampled randomized trigonometric transform ``sqrt(m/s) R F D``.

    ``F`` is the orthonormal DCT-II, ``D`` a random sign diagonal and ``R`` a
    uniform restriction to ``sketch_dim`` distinct rows. No padding is needed
    since the DCT is defined for every length.
    """
    return SketchOperator("srtt", input_dim, sketch_dim, seed)


def column_sampling(input_dim, sketch_dim, seed):
    """Uniform sampling of ``sketch_dim`` distinct coordinates, without replacement."""
    return SketchOperator("column_sampling", input_dim, sketch_dim, seed)


def make(kind, input_dim, sketch_dim, seed, zeta=None):
    if kind == "sparse_sign":
        return sparse_sign(input_dim, sketch_dim, zeta, seed)
    if zeta is not None:
        raise ParameterError(f"zeta only applies to sparse_sign sketches, not {kind}")
    return SketchOperator(kind, input_dim, sketch_dim, seed)


def apply_left(op, a):
    """``S @ a``."""
    return op.left(a)


def apply_right(a, op):
    """``a @ S.T`` (i.e. ``a`` times the ``m x s`` test matrix ``S.T``)."""
    return op.right(a)
