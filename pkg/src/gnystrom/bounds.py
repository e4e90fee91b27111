"""Closed-form expected-error bounds evaluated on a known spectrum.

Each bound takes a :class:`SpectrumTail` (the full singular-value vector and
a target rank ``k``) and the sketch size ``r``. Bounds marked *gate-eligible*
are genuine inequalities on expected errors; :func:`bound_rsvd_spec_heuristic`
is an approximate (``<~``) estimate and is only ever reported.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError


@dataclass(frozen=True)
class SpectrumTail:
    sigma: np.ndarray
    k: int

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=np.float64).ravel()
        if np.any(sigma < 0) or np.any(np.diff(sigma) > 0):
            raise DomainError("sigma must be nonnegative and nonincreasing")
        if not 1 <= self.k < sigma.size:
            raise DomainError(f"k must lie in [1, {sigma.size - 1}], got {self.k}")
        object.__setattr__(self, "sigma", sigma)

    @property
    def tail(self):
        """``sigma_{k+1}, sigma_{k+2}, ...``"""
        return self.sigma[self.k:]

    def tail_power_norm(self, p):
        """``||Sigma_2^p||_F = (sum_{i>k} sigma_i^{2p})^{1/2}``."""
        return float(np.sqrt(np.sum(self.tail ** (2 * p))))

    def optimal_error(self):
        """``||A - A_k||_F``."""
        return self.tail_power_norm(1)


def _oversampling_ratio(tail, r):
    k = tail.k
    if r < k + 2:
        raise DomainError(f"bound needs r >= k + 2, got r = {r}, k = {k}")
    return k / (r - k - 1)


def bound_rsvd_frob(tail, r):
    """``sqrt(1 + k/(r-k-1)) ||A - A_k||_F`` (gate-eligible)."""
    return math.sqrt(1 + _oversampling_ratio(tail, r)) * tail.optimal_error()


def bound_gn_frob(tail, r, l):
    """``sqrt((1 + (r+l)/(l-1)) (1 + k/(r-k-1))) ||A - A_k||_F`` (gate-eligible)."""
    if l < 2:
        raise DomainError(f"GN bound needs oversampling l >= 2, got {l}")
    factor = (1 + (r + l) / (l - 1)) * (1 + _oversampling_ratio(tail, r))
    return math.sqrt(factor) * tail.optimal_error()


def bound_subspace_iteration_frob(tail, r, q):
    """Bound for ``(I - P_{(AA^T)^q A Omega}) A`` in the Frobenius norm.

    ``(1 + k/(r-k-1))^{1/(4q+2)} ||Sigma_2^{2q+1}||_F^{1/(2q+1)}``; ``q = 0``
    recovers :func:`bound_rsvd_frob`.
    """
    if q < 0:
        raise DomainError(f"q must be >= 0, got {q}")
    p = 2 * q + 1
    return ((1 + _oversampling_ratio(tail, r)) ** (1 / (2 * p))
            * tail.tail_power_norm(p) ** (1 / p))


def bound_row_subspace_frob(tail, r, q):
    """Bound for ``A (I - P_{(A^T A)^q Omega})`` in the Frobenius norm, ``q >= 1``.

    ``(1 + k/(r-k-1))^{1/(4q)} ||Sigma_2^{2q}||_F^{1/(2q)}``.
    """
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    p = 2 * q
    return ((1 + _oversampling_ratio(tail, r)) ** (1 / (2 * p))
            * tail.tail_power_norm(p) ** (1 / p))


def bound_gnc_frob(tail, r):
    """``(1 + k/(r-k-1))^{1/4} ||Sigma_2^2||_F^{1/2}`` (gate-eligible)."""
    return bound_row_subspace_frob(tail, r, 1)


def bound_gnc_spec(tail, r):
    """Spectral-norm bound for GN-c (gate-eligible, compared with trial means).

    ``[(1 + sqrt(k/(r-k-1))) sigma_{k+1}^2
    + e sqrt(r)/(r-k) (sum_{i>k} sigma_i^4)^{1/2}]^{1/2}``
    """
    ratio = _oversampling_ratio(tail, r)
    k = tail.k
    first = (1 + math.sqrt(ratio)) * tail.tail[0] ** 2
    second = math.e * math.sqrt(r) / (r - k) * tail.tail_power_norm(2)
    return math.sqrt(first + second)


def bound_rsvd_spec_heuristic(tail, r, m):
    """``(sqrt(m) + sqrt(r)) / (sqrt(r) - sqrt(k)) sigma_{k+1}``.

    Approximate, not an inequality: report only, never a gate.
    """
    k = tail.k
    if r <= k:
        raise DomainError(f"heuristic needs r > k, got r = {r}, k = {k}")
    return (math.sqrt(m) + math.sqrt(r)) / (math.sqrt(r) - math.sqrt(k)) * tail.tail[0]


def frobenius_bound(scheme, tail, r, l=None):
    """Gate-eligible Frobenius bound for ``scheme``, or None if none applies.

    Only rSVD, GN and GN-c carry a bound; ``r < k + 2`` also yields None.
    """
    if r < tail.k + 2:
        return None
    if scheme == "rsvd":
        return bound_rsvd_frob(tail, r)
    if scheme == "gn":
        return bound_gn_frob(tail, r, l) if l is not None and l >= 2 else None
    if scheme == "gn-c":
        return bound_gnc_frob(tail, r)
    return None
