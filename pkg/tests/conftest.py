import itertools

import numpy as np
import pytest
import scipy.linalg


@pytest.fixture
def rng():
    return np.random.default_rng(20170101)


@pytest.fixture
def small_problem(rng):
    """n=50, p=12 Gaussian design with a sparse signal."""
    n, p = 50, 12
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[[0, 3, 7]] = [2.0, -1.5, 1.0]
    Y = X @ beta + rng.standard_normal(n)
    return X, Y


@pytest.fixture
def orthonormal_problem(rng):
    n, p = 40, 8
    Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    Y = Q @ np.array([3.0, -2.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0]) + 0.1 * rng.standard_normal(n)
    return Q, Y


def least_squares_rss(X, Y, cols):
    """RSS of the minimum-norm least squares fit on cols."""
    XA = X[:, list(cols)]
    coef, *_ = scipy.linalg.lstsq(XA, Y, cond=np.finfo(float).eps * max(XA.shape))
    r = Y - XA @ coef
    return float(r @ r)


def enumerate_best_rss(X, Y, k, allowed=None, forced=()):
    """Smallest RSS over supports of size <= k (exhaustive)."""
    p = X.shape[1]
    pool = [j for j in (range(p) if allowed is None else allowed) if j not in forced]
    best = float(Y @ Y) if not forced else np.inf
    for size in range(0, k - len(forced) + 1):
        for extra in itertools.combinations(pool, size):
            cols = list(forced) + list(extra)
            if not cols:
                continue
            best = min(best, least_squares_rss(X, Y, cols))
    return best


def enumerate_rss_by_size(X, Y):
    """Entry k is the smallest RSS over supports of size <= k, for k = 0..p."""
    p = X.shape[1]
    best = np.full(p + 1, np.inf)
    best[0] = float(Y @ Y)
    for size in range(1, p + 1):
        for cols in itertools.combinations(range(p), size):
            best[size] = min(best[size], least_squares_rss(X, Y, cols))
    return np.minimum.accumulate(best)
