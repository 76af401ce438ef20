"""
AR(1) predictor covariance, Sigma_ij = rho^|i - j|.
"""

from functools import cached_property

import numpy as np
import scipy.linalg


class AR1Covariance:
    """
    Covariance descriptor for the autoregressive design.

    Exposes the dense matrix, quadratic forms v^T Sigma v and the lower
    Cholesky factor used to sample predictor rows. Dense pieces are built
    lazily and cached.
    """

    def __init__(self, p: int, rho: float):
        if p < 1:
            raise ValueError(f"p must be >= 1, got {p}")
        if not 0.0 <= rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {rho}")
        self.p = int(p)
        self.rho = float(rho)

    def __repr__(self) -> str:
        return f"AR1Covariance(p={self.p}, rho={self.rho})"

    @cached_property
    def matrix(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.rho ** np.arange(self.p))

    @cached_property
    def cholesky(self) -> np.ndarray:
        """Lower-triangular L with L @ L.T == Sigma."""
        return scipy.linalg.cholesky(self.matrix, lower=True)

    def quad_form(self, v: np.ndarray) -> float:
        """Evaluate v^T Sigma v."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.p,):
            raise ValueError(f"expected a vector of length {self.p}, got shape {v.shape}")
        return float(v @ (self.matrix @ v))

    def quad_forms(self, V: np.ndarray) -> np.ndarray:
        """Row-wise quadratic forms for a stack of vectors (m x p)."""
        V = np.atleast_2d(np.asarray(V, dtype=float))
        return np.einsum("ij,ij->i", V @ self.matrix, V)


def make_covariance(p: int, rho: float) -> AR1Covariance:
    return AR1Covariance(p, rho)
