"""Dense projector constructions ``P_{X,Y} = X (Y^T X)^+ Y^T`` (small instances only)."""

import numpy as np

from ..linalg import pinv_eps


def oblique_projector(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return x @ pinv_eps(y.T @ x) @ y.T


def orthogonal_projector(x):
    return oblique_projector(x, x)
