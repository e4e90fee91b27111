"""Randomized low-rank approximation of nonsymmetric matrices.

Generalized Nystrom variants (GN, stabilized GN, GN with row and column
sketching, GN with column sketching), randomized SVD, classical Nystrom and
RURV, together with sketching operators, synthetic test matrices, Matrix
Market I/O, expected-error bounds and a benchmark harness.
"""

from .approx import (
    ApproxConfig,
    LowRankFactors,
    gn,
    gn_c,
    gn_rc,
    gn_stabilized,
    nystrom_spsd,
    relative_error,
    rsvd,
    run_scheme,
    rurv,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxConfig", "LowRankFactors", "gn", "gn_c", "gn_rc", "gn_stabilized",
    "nystrom_spsd", "relative_error", "rsvd", "run_scheme", "rurv",
]
