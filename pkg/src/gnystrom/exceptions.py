"""Exception types raised across the package."""

import numpy as np


class InvalidInputError(ValueError):
    """Input matrix contains NaN/Inf or is otherwise unusable."""


class DimensionError(ValueError):
    """Operand shapes do not conform."""


class ParameterError(ValueError):
    """A scheme or operator parameter is out of its admissible range."""


class SymmetryError(ValueError):
    """A symmetric input was required but the matrix is not symmetric."""


class DegenerateInputError(ValueError):
    """The input makes the requested quantity undefined (e.g. zero norm)."""


class FactorizationError(np.linalg.LinAlgError):
    """A dense factorization failed to converge."""


class IllConditionedTriangularError(np.linalg.LinAlgError):
    """A triangular factor has a diagonal entry below the conditioning guard.

    ``index`` is the offending diagonal position.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class DomainError(ValueError):
    """A bound formula was evaluated outside the parameters it is defined for."""


class MatrixMarketError(ValueError):
    """Malformed Matrix Market file. ``lineno`` is 1-based, or None."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class InsufficientSampleError(ValueError):
    """Too few trials for a trial-mean bound comparison."""
