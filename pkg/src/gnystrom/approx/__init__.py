"""Approximation schemes returning factored low-rank output."""

from .factors import (
    ApproxConfig,
    LowRankFactors,
    dense_relative_error,
    relative_error,
    spectral_error,
)
from .nystrom import nystrom_spsd
from .projectors import oblique_projector, orthogonal_projector
from .rurv import RurvFactors, rurv
from .schemes import SCHEMES, gn, gn_c, gn_rc, gn_stabilized, rsvd, run_scheme, truncated_pinv

__all__ = [
    "ApproxConfig", "LowRankFactors", "RurvFactors", "SCHEMES",
    "dense_relative_error", "gn", "gn_c", "gn_rc", "gn_stabilized", "nystrom_spsd",
    "oblique_projector", "orthogonal_projector", "relative_error", "rsvd", "run_scheme",
    "rurv", "spectral_error", "truncated_pinv",
]
