"""
CSV export of fitted paths.

Coefficient indices are 1-based so they line up with the x1..xp dataset
columns. Supports are written as space-separated index lists.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from config import get_logger
from .lasso import LassoPath, objective
from .relaxed import RelaxedPath
from .stepwise import StepwisePath
from .subset import SubsetPath

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"


def format_support(indices) -> str:
    return " ".join(str(int(j) + 1) for j in indices)


def _triplets(betas: np.ndarray) -> "tuple[np.ndarray, np.ndarray, np.ndarray]":
    rows, cols = np.nonzero(betas)
    return rows, cols + 1, betas[rows, cols]


def lasso_path_frame(path: Union[LassoPath, RelaxedPath]) -> pd.DataFrame:
    """Sparse (lambda, gamma, index, value) rows; gamma is empty for the plain lasso."""
    if isinstance(path, RelaxedPath):
        flat = path.as_coefficient_path()
        lambdas, gammas = flat.labels["lambda"], flat.labels["gamma"]
    else:
        flat = path.as_coefficient_path()
        lambdas, gammas = flat.labels["lambda"], np.full(len(flat), np.nan)
    rows, index, value = _triplets(flat.betas)
    return pd.DataFrame({
        "lambda": lambdas[rows],
        "gamma": gammas[rows],
        "index": index,
        "value": value,
    })


def lasso_support_frame(path: Union[LassoPath, RelaxedPath], X: np.ndarray, Y: np.ndarray) -> pd.DataFrame:
    """One row per path point: lambda, gamma, support and objective value."""
    records = []
    if isinstance(path, RelaxedPath):
        for i, lam in enumerate(path.base.lambdas):
            for q, gamma in enumerate(path.gammas):
                beta = path.betas[i, q]
                records.append((lam, gamma, format_support(np.flatnonzero(beta)), objective(X, Y, beta, lam)))
    else:
        for lam, beta in zip(path.lambdas, path.betas):
            records.append((lam, np.nan, format_support(np.flatnonzero(beta)), objective(X, Y, beta, lam)))
    return pd.DataFrame(records, columns=["lambda", "gamma", "support", "objective"])


def stepwise_path_frame(path: StepwisePath) -> pd.DataFrame:
    """Sparse (k, selected, score, rss, index, value) rows; k = 0 contributes one empty row."""
    records = [(0, "", np.nan, path.rss[0], "", np.nan)]
    for k in range(1, len(path)):
        beta = path.betas[k]
        selected = int(path.order[k - 1]) + 1
        for j in np.flatnonzero(beta):
            records.append((k, selected, path.scores[k - 1], path.rss[k], int(j) + 1, beta[j]))
    return pd.DataFrame(records, columns=["k", "selected", "score", "rss", "index", "value"])


def subset_path_frame(path: SubsetPath) -> pd.DataFrame:
    return pd.DataFrame({
        "k": [s.k for s in path.solutions],
        "support": [format_support(s.support) for s in path.solutions],
        "rss": [s.rss for s in path.solutions],
        "certified": [bool(s.certified) for s in path.solutions],
        "nodes_explored": [s.nodes_explored for s in path.solutions],
        "wall_time": [s.wall_time for s in path.solutions],
    })


def write_path_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="")
    logger.debug(f"💾 Wrote {len(frame)} path rows to {path}")
    return path


def export_path(path, out: Union[str, Path], X: Optional[np.ndarray] = None,
                Y: Optional[np.ndarray] = None) -> Path:
    """
    Write any solver path to CSV. For lasso and relaxed lasso paths with X and
    Y given, the compact support variant is written next to it as
    <stem>_support.csv.
    """
    out = Path(out)
    if isinstance(path, (LassoPath, RelaxedPath)):
        written = write_path_csv(lasso_path_frame(path), out)
        if X is not None and Y is not None:
            write_path_csv(lasso_support_frame(path, X, Y), out.with_name(f"{out.stem}_support.csv"))
        return written
    if isinstance(path, StepwisePath):
        return write_path_csv(stepwise_path_frame(path), out)
    if isinstance(path, SubsetPath):
        return write_path_csv(subset_path_frame(path), out)
    raise TypeError(f"cannot export {type(path).__name__}")
