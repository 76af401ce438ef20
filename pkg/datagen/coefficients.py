"""
True coefficient patterns ("beta-types") for the simulation design.
"""

from enum import IntEnum
import math

import numpy as np


class BetaType(IntEnum):
    """Sparsity patterns for the true coefficient vector."""
    SPACED = 1      # s ones at equally spaced indices between 1 and p
    LEADING = 2     # first s entries equal to one
    DECREASING = 3  # first s entries equally spaced from 10 down to 0.5
    DECAYING = 5    # first s ones, then 0.5^(i - s)


def spaced_indices(p: int, s: int) -> np.ndarray:
    """
    Zero-based positions of the type-1 ones.

    Position j (1-based, j = 1..s) is round(1 + (j - 1)(p - 1)/(s - 1)) with
    halves rounded up, which hits both endpoints 1 and p. The spacing is at
    least one whenever s <= p, so positions never collide.
    """
    step = (p - 1) / (s - 1)
    return np.array([math.floor(1 + j * step + 0.5) - 1 for j in range(s)], dtype=int)


def make_coefficients(p: int, s: int, beta_type) -> np.ndarray:
    """
    Build beta0 for the given dimension, sparsity level and pattern.

    Args:
        p: Number of predictors
        s: Sparsity level (1 <= s <= p)
        beta_type: One of 1, 2, 3, 5 (or a BetaType)

    Returns:
        Coefficient vector of length p
    """
    beta_type = BetaType(int(beta_type))
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if not 1 <= s <= p:
        raise ValueError(f"s must satisfy 1 <= s <= p, got s={s}, p={p}")
    if s < 2 and beta_type in (BetaType.SPACED, BetaType.DECREASING):
        raise ValueError(f"beta-type {int(beta_type)} needs s >= 2 (spacing is undefined for one point)")

    beta = np.zeros(p)
    if beta_type is BetaType.SPACED:
        beta[spaced_indices(p, s)] = 1.0
    elif beta_type is BetaType.LEADING:
        beta[:s] = 1.0
    elif beta_type is BetaType.DECREASING:
        beta[:s] = np.linspace(10.0, 0.5, s)
    else:
        beta[:s] = 1.0
        beta[s:] = 0.5 ** np.arange(1, p - s + 1)
    return beta
