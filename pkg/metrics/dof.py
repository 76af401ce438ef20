"""
Monte Carlo effective degrees of freedom,

    df(t) = (1 / sigma2) * sum_i Cov(yhat_i(t), y_i),

estimated with X held fixed and fresh noise in every repetition.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Union

import numpy as np
import pandas as pd

from config import get_logger, get_thread_cap
from datagen import GroundTruth
from errors import DegreesOfFreedomError, SparseBenchError
from solvers import CoefficientPath, active_least_squares

logger = get_logger(__name__)

MAX_DROPPED_FRACTION = 0.10

Fitter = Callable[[np.ndarray, np.ndarray], Union[CoefficientPath, np.ndarray]]


@dataclass(eq=False)
class DfCurve:
    method: str
    df: np.ndarray
    se: np.ndarray
    mean_nnz: np.ndarray
    reps: int
    dropped: int = 0
    labels: Dict[str, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return self.df.shape[0]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"method": self.method, "index": np.arange(len(self))})
        for name, values in self.labels.items():
            frame[name] = values
        frame["df"] = self.df
        frame["se"] = self.se
        frame["mean_nnz"] = self.mean_nnz
        frame["reps"] = self.reps
        return frame


def ols_fitter(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return active_least_squares(X, np.arange(X.shape[1]), Y)[None, :]


def null_fitter(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return np.zeros((1, X.shape[1]))


def _as_betas(result) -> np.ndarray:
    if isinstance(result, CoefficientPath):
        return result.betas
    return np.atleast_2d(np.asarray(result, dtype=float))


def covariance_df(fitted: np.ndarray, Y: np.ndarray, sigma2: float) -> "tuple[np.ndarray, np.ndarray]":
    """
    Degrees of freedom and delete-one jackknife standard errors.

    Args:
        fitted: (R, m, n) fitted values per repetition and tuning point
        Y: (R, n) responses
        sigma2: Noise variance

    Returns:
        (df, se), each of length m
    """
    R = fitted.shape[0]
    if R < 3:
        raise ValueError(f"need at least 3 repetitions, got {R}")
    a = fitted - fitted.mean(axis=0)
    b = Y - Y.mean(axis=0)
    A = a.sum(axis=0)                          # (m, n)
    B = b.sum(axis=0)                          # (n,)
    S = np.einsum("rmn,rn->mn", a, b)

    df = (S - A * B / R).sum(axis=1) / ((R - 1) * sigma2)

    loo_S = S[None] - a * b[:, None, :]
    loo_A = A[None] - a
    loo_B = B[None] - b
    loo = (loo_S - loo_A * loo_B[:, None, :] / (R - 1)).sum(axis=2) / ((R - 2) * sigma2)
    se = np.sqrt((R - 1) / R * ((loo - loo.mean(axis=0)) ** 2).sum(axis=0))
    return df, se


def df_montecarlo(fitter: Fitter, X: np.ndarray, truth: GroundTruth, reps: int,
                  stream: np.random.Generator, method: str = "custom",
                  labels: Optional[Dict[str, np.ndarray]] = None,
                  max_workers: Optional[int] = None) -> DfCurve:
    """
    Estimate degrees of freedom of a path-producing procedure.

    Noise vectors are drawn from the stream in repetition order before any
    fit runs, so the estimate does not depend on the worker count. A
    repetition whose fit raises is dropped; more than 10% dropped raises
    DegreesOfFreedomError.

    Args:
        fitter: (X, Y) -> CoefficientPath or (m x p) coefficient array,
            the same length m for every repetition
        X: Fixed design
        truth: Coefficients and noise variance
        reps: Number of Monte Carlo repetitions
        stream: Generator for the noise
        method: Label carried into the curve
        labels: Tuning values of the m path points
        max_workers: Thread cap (default from SPARSEBENCH_THREADS)
    """
    if reps < 3:
        raise ValueError(f"reps must be >= 3, got {reps}")
    n = X.shape[0]
    mean = X @ truth.beta0
    noise = np.sqrt(truth.sigma2) * stream.standard_normal((reps, n))
    Ys = mean[None, :] + noise

    def fit_one(r: int):
        try:
            return _as_betas(fitter(X, Ys[r]))
        except (SparseBenchError, ValueError, np.linalg.LinAlgError) as e:
            logger.warning(f"⚠️ df repetition {r} failed for {method}: {e}")
            return None

    workers = max_workers or get_thread_cap()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fit_one, range(reps)))
    else:
        results = [fit_one(r) for r in range(reps)]

    kept = [r for r, betas in enumerate(results) if betas is not None]
    dropped = reps - len(kept)
    if dropped > MAX_DROPPED_FRACTION * reps:
        raise DegreesOfFreedomError(
            f"{dropped} of {reps} repetitions failed for {method}", dropped=dropped, reps=reps
        )
    shapes = {results[r].shape for r in kept}
    if len(shapes) != 1:
        raise DegreesOfFreedomError(
            f"fitter returned paths of differing shapes {sorted(shapes)} for {method}",
            dropped=dropped, reps=reps,
        )

    betas = np.stack([results[r] for r in kept])          # (R, m, p)
    fitted = np.einsum("rmp,np->rmn", betas, X)
    df, se = covariance_df(fitted, Ys[kept], truth.sigma2)
    mean_nnz = np.count_nonzero(betas, axis=2).mean(axis=0)

    logger.info(f"📐 df for {method}: {df.size} points from {len(kept)} repetitions"
                + (f" ({dropped} dropped)" if dropped else ""))
    return DfCurve(method=method, df=df, se=se, mean_nnz=mean_nnz, reps=len(kept),
                   dropped=dropped, labels=dict(labels or {}))
