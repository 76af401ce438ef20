"""
Simplified relaxed lasso: blend of the lasso fit and least squares on its
active set,

    beta(lambda, gamma) = gamma * beta_lasso(lambda) + (1 - gamma) * beta_LS(lambda).
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from config import get_logger
from .lasso import LassoPath
from .paths import CoefficientPath

logger = get_logger(__name__)

DEFAULT_NGAMMA = 10


def gamma_grid(count: int = DEFAULT_NGAMMA) -> np.ndarray:
    """Equally spaced gammas from 1 down to 0."""
    if count < 2:
        raise ValueError(f"need at least two gamma values, got {count}")
    return np.linspace(1.0, 0.0, count)


def active_least_squares(X: np.ndarray, active: Sequence[int], Y: np.ndarray) -> np.ndarray:
    """
    Least squares of Y on the active columns, zero-padded to length p.

    Rank-deficient submatrices get the minimum-norm solution.
    """
    active = np.asarray(active, dtype=int)
    beta = np.zeros(X.shape[1])
    if active.size == 0:
        return beta
    if active.size > X.shape[0]:
        logger.debug(f"active set of size {active.size} exceeds n={X.shape[0]}, using minimum-norm fit")
    XA = X[:, active]
    # Singular values below eps * max(shape) * s_max count as zero.
    cond = np.finfo(float).eps * max(XA.shape)
    coef, *_ = scipy.linalg.lstsq(XA, Y, cond=cond, lapack_driver="gelsd")
    beta[active] = coef
    return beta


@dataclass(eq=False)
class RelaxedPath:
    base: LassoPath
    gammas: np.ndarray
    betas: np.ndarray  # (m, g, p)

    def as_coefficient_path(self) -> CoefficientPath:
        """Flatten lambda-major: entry i * g + q is (lambda_i, gamma_q)."""
        m, g, p = self.betas.shape
        return CoefficientPath(
            "relaxo",
            self.betas.reshape(m * g, p),
            {
                "lambda": np.repeat(self.base.lambdas, g),
                "gamma": np.tile(self.gammas, m),
            },
        )


def relaxed_path(X: np.ndarray, Y: np.ndarray, base: LassoPath,
                 gammas: Optional[np.ndarray] = None) -> RelaxedPath:
    """
    Relaxed lasso over every (lambda, gamma) pair of a lasso path.

    Args:
        X, Y: The data the base path was fit on
        base: Lasso path
        gammas: Values in [0, 1] that include both 1 and 0 (default: ten
            equally spaced values from 1 to 0)
    """
    gammas = gamma_grid() if gammas is None else np.asarray(gammas, dtype=float)
    if np.any((gammas < 0) | (gammas > 1)):
        raise ValueError("gammas must lie in [0, 1]")
    if not (np.any(gammas == 1.0) and np.any(gammas == 0.0)):
        raise ValueError("gammas must contain both 1 and 0")

    m, p = base.betas.shape
    betas = np.zeros((m, gammas.size, p))
    previous_support, ls = None, None
    for i, (lasso_beta, support) in enumerate(zip(base.betas, base.supports)):
        if support.size == 0:
            continue
        if previous_support is None or not np.array_equal(support, previous_support):
            ls = active_least_squares(X, support, Y)
            previous_support = support
        for q, gamma in enumerate(gammas):
            betas[i, q] = gamma * lasso_beta + (1.0 - gamma) * ls

    return RelaxedPath(base=base, gammas=gammas, betas=betas)
