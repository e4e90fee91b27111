"""Synthetic test matrices with exactly known spectra.

Dense generators build ``A = M diag(sigma) N^T`` with ``M``, ``N`` the
sign-normalized Q-factors of two independent square Gaussian draws, so the
singular values are ``sigma`` up to roundoff.

Generator names (CLI and config files): ``poly-slow``, ``poly-fast``,
``exp-slow``, ``exp-fast``, ``inv-square``, ``exact-rank:<r>``,
``flat-sparse``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import ParameterError
from .linalg import qr_econ
from .sketch import rng_from_seed

SPECTRUM_KINDS = ("poly", "exp", "inv-square", "explicit", "exact-rank")
GENERATOR_NAMES = ("poly-slow", "poly-fast", "exp-slow", "exp-fast", "inv-square",
                   "exact-rank:<r>", "flat-sparse")


@dataclass(frozen=True)
class SpectrumSpec:
    """``poly``: ``i^-p``; ``exp``: ``10^(-(i-1) q)``; ``inv-square``: ``1/i^2``;
    ``exact-rank``: ``1/i`` for ``i <= r`` then zeros; ``explicit``: ``values``.
    """

    kind: str
    param: float | None = None
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in SPECTRUM_KINDS:
            raise ParameterError(f"unknown spectrum kind {self.kind!r}")
        if self.kind in ("poly", "exp") and not (self.param and self.param > 0):
            raise ParameterError(f"{self.kind} decay needs a positive parameter, got {self.param}")
        if self.kind == "exact-rank" and not (self.param and int(self.param) >= 1):
            raise ParameterError(f"exact-rank needs r >= 1, got {self.param}")

    def sigma(self, m):
        i = np.arange(1, m + 1, dtype=np.float64)
        if self.kind == "poly":
            return i ** -self.param
        if self.kind == "exp":
            return 10.0 ** (-(i - 1) * self.param)
        if self.kind == "inv-square":
            return 1.0 / i ** 2
        if self.kind == "exact-rank":
            r = int(self.param)
            if r > m:
                raise ParameterError(f"exact rank {r} exceeds dimension {m}")
            return np.where(i <= r, 1.0 / i, 0.0)
        values = np.asarray(self.values, dtype=np.float64)
        if values.size != m:
            raise ParameterError(f"explicit spectrum has {values.size} values, need {m}")
        return np.sort(values)[::-1]


POLY_SLOW = SpectrumSpec("poly", 1.0)
POLY_FAST = SpectrumSpec("poly", 2.0)
EXP_SLOW = SpectrumSpec("exp", 0.125)
EXP_FAST = SpectrumSpec("exp", 0.25)
INV_SQUARE = SpectrumSpec("inv-square")

_PRESETS = {"poly-slow": POLY_SLOW, "poly-fast": POLY_FAST, "exp-slow": EXP_SLOW,
            "exp-fast": EXP_FAST, "inv-square": INV_SQUARE}


def exact_rank(r):
    return SpectrumSpec("exact-rank", r)


def parse_generator(name):
    """Map a generator name to a :class:`SpectrumSpec`, or ``"flat-sparse"``."""
    if name in _PRESETS:
        return _PRESETS[name]
    if name == "flat-sparse":
        return name
    if name.startswith("exact-rank:"):
        try:
            return exact_rank(int(name.split(":", 1)[1]))
        except ValueError:
            pass
    raise ParameterError(f"unknown generator {name!r}; known: {', '.join(GENERATOR_NAMES)}")


def random_orthogonal(m, rng):
    return qr_econ(rng.standard_normal((m, m))).q


def synth_dense(spec, m, seed=0, n=None):
    """``m x n`` matrix (square by default) with singular values ``spec.sigma(min(m, n))``.

    Returns ``(A, sigma)``.
    """
    n = m if n is None else n
    if min(m, n) < 2:
        raise ParameterError(f"dimensions must be >= 2, got {m} x {n}")
    p = min(m, n)
    sigma = spec.sigma(p)
    left = random_orthogonal(m, rng_from_seed(seed, 0, 2))[:, :p]
    right = random_orthogonal(n, rng_from_seed(seed, 1, 2))[:, :p]
    return (left * sigma) @ right.T, sigma


def synth_spsd(rank, m, seed=0):
    """``B B^T`` with ``B`` an ``m x rank`` Gaussian draw: SPSD of exact rank ``rank``."""
    if not 1 <= rank <= m:
        raise ParameterError(f"rank must lie in [1, {m}], got {rank}")
    b = rng_from_seed(seed).standard_normal((m, rank))
    return b @ b.T


def synth_spsd_spectrum(spec, m, seed=0):
    """SPSD ``M diag(sigma) M^T`` with eigenvalues ``spec.sigma(m)``."""
    sigma = spec.sigma(m)
    q = random_orthogonal(m, rng_from_seed(seed))
    a = (q * sigma) @ q.T
    return 0.5 * (a + a.T), sigma


def low_rank(m, n, rank, seed=0):
    """Rectangular ``m x n`` matrix of exact rank ``rank`` (product of Gaussian factors)."""
    if not 1 <= rank <= min(m, n):
        raise ParameterError(f"rank must lie in [1, {min(m, n)}], got {rank}")
    rng = rng_from_seed(seed)
    return rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n))


def flat_spectrum_sparse(m, density=0.01, seed=0):
    """Random sparse nonsymmetric ``m x m`` CSR matrix with Gaussian nonzeros.

    The leading singular values of such a matrix cluster near the edge of
    its limiting distribution, giving a flat leading spectrum.
    """
    if not 0 < density <= 1:
        raise ParameterError(f"density must lie in (0, 1], got {density}")
    rng = rng_from_seed(seed)
    a = sp.random_array((m, m), density=density, format="csr", rng=rng,
                        data_sampler=rng.standard_normal)
    a.sum_duplicates()
    a.sort_indices()
    return a


def generate(name, m, seed=0, density=0.01):
    """Build a named test matrix. Returns ``(matrix, sigma or None)``."""
    spec = parse_generator(name)
    if spec == "flat-sparse":
        return flat_spectrum_sparse(m, density, seed), None
    return synth_dense(spec, m, seed)
