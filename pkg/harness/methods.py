"""
The four path methods behind a common fit() interface.

Each method turns training data into a CoefficientPath whose first entry is
the zero fit (lambda_max for the lasso family, k = 0 for stepwise and best
subset). fit() times the solve and records solver failures instead of
raising them.
"""

from dataclasses import dataclass
import time
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np

from config import METHOD_TOKENS, get_logger
from errors import SparseBenchError
from solvers import (
    CoefficientPath,
    bs_path,
    fs_path,
    gamma_grid,
    lambda_grid,
    lasso_path,
    relaxed_path,
)
from .settings import HarnessSettings

logger = get_logger(__name__)

SOLVER_ERRORS = (SparseBenchError, ValueError, ArithmeticError, np.linalg.LinAlgError)


@dataclass(eq=False)
class MethodFit:
    method: str
    path: Optional[CoefficientPath]
    wall_time: float
    raw: Any = None
    error: Optional[str] = None
    certified: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.path is not None


class PathMethod:
    """Base class: subclasses implement solve() and to_path()."""

    token = ""

    def __init__(self, settings: HarnessSettings):
        self.settings = settings

    def solve(self, X: np.ndarray, Y: np.ndarray, stream: Optional[np.random.Generator] = None,
              grid: Optional[np.ndarray] = None):
        raise NotImplementedError

    def to_path(self, raw) -> CoefficientPath:
        return raw.as_coefficient_path()

    def certified(self, raw) -> Optional[int]:
        return None

    def fit(self, X: np.ndarray, Y: np.ndarray, stream: Optional[np.random.Generator] = None,
            grid: Optional[np.ndarray] = None) -> MethodFit:
        start = time.perf_counter()
        try:
            raw = self.solve(X, Y, stream=stream, grid=grid)
            path = self.to_path(raw)
        except SOLVER_ERRORS as e:
            wall = time.perf_counter() - start
            logger.error(f"❌ {self.token} failed after {wall:.2f}s: {e}")
            return MethodFit(self.token, None, wall, error=f"{type(e).__name__}: {e}")
        wall = time.perf_counter() - start
        logger.debug(f"✅ {self.token}: path of {len(path)} points in {wall:.3f}s")
        return MethodFit(self.token, path, wall, raw=raw, certified=self.certified(raw))

    def fitter(self, grid: Optional[np.ndarray] = None, seed: int = 0) -> Callable:
        """(X, Y) -> CoefficientPath with a fixed grid and solver seed, for Monte Carlo use."""
        def run(X, Y):
            return self.to_path(self.solve(X, Y, stream=np.random.default_rng(seed), grid=grid))
        return run


class LassoMethod(PathMethod):
    token = "lasso"

    def grid(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return lambda_grid(X, Y, m=self.settings.nlambda, eps=self.settings.lambda_eps)

    def solve(self, X, Y, stream=None, grid=None):
        return lasso_path(X, Y, self.grid(X, Y) if grid is None else grid)


class RelaxedLassoMethod(LassoMethod):
    token = "relaxo"

    def __init__(self, settings: HarnessSettings, gammas: Optional[np.ndarray] = None):
        super().__init__(settings)
        self.gammas = gamma_grid(settings.ngamma) if gammas is None else np.asarray(gammas, dtype=float)

    def solve(self, X, Y, stream=None, grid=None):
        base = super().solve(X, Y, grid=grid)
        return relaxed_path(X, Y, base, self.gammas)


class StepwiseMethod(PathMethod):
    token = "fs"

    def solve(self, X, Y, stream=None, grid=None):
        return fs_path(X, Y, kmax=self.settings.kmax)

    def to_path(self, raw) -> CoefficientPath:
        path = raw.as_coefficient_path()
        size = self.settings.kmax + 1
        if len(path) < size:
            # Collinear stop: repeat the last model so every repetition has the same grid.
            pad = np.repeat(path.betas[-1:], size - len(path), axis=0)
            path = CoefficientPath(self.token, np.vstack([path.betas, pad]), {"k": np.arange(size)})
        return path


class SubsetMethod(PathMethod):
    token = "bs"

    def solve(self, X, Y, stream=None, grid=None):
        s = self.settings
        return bs_path(
            X, Y, kmax=s.kmax, budget_per_k=s.budget_seconds, stream=stream,
            restarts=s.restarts, max_iter=s.iht_max_iter, tol=s.iht_tol, max_nodes=s.max_nodes,
        )

    def certified(self, raw) -> Optional[int]:
        return raw.certified_count


METHODS = {
    "lasso": LassoMethod,
    "relaxo": RelaxedLassoMethod,
    "fs": StepwiseMethod,
    "bs": SubsetMethod,
}


def create_method(token: str, settings: HarnessSettings) -> PathMethod:
    """Factory function to create a path method from its token."""
    try:
        return METHODS[token](settings)
    except KeyError:
        raise ValueError(f"unknown method '{token}', expected one of {list(METHOD_TOKENS)}") from None


def parse_methods(methods: Optional[Iterable[str]]) -> List[str]:
    """
    Normalize a method selection to canonical order.

    Accepts an iterable of tokens or a comma-separated string; None means all.
    """
    if methods is None:
        return list(METHOD_TOKENS)
    if isinstance(methods, str):
        methods = [m.strip() for m in methods.split(",") if m.strip()]
    chosen = set(methods)
    unknown = sorted(chosen - set(METHOD_TOKENS))
    if unknown or not chosen:
        raise ValueError(f"unknown or empty method selection {sorted(chosen)}; "
                         f"expected a subset of {list(METHOD_TOKENS)}")
    return [m for m in METHOD_TOKENS if m in chosen]


def df_fitters(token: str, settings: HarnessSettings, grid: Optional[np.ndarray],
               seed: int = 0) -> Dict[str, Callable]:
    """
    Monte Carlo fitters for one method, keyed by curve label.

    The relaxed lasso yields two curves, gamma = 0.5 and gamma = 0, on the
    shared lambda grid.
    """
    if token == "relaxo":
        method = RelaxedLassoMethod(settings, gammas=np.array([1.0, 0.5, 0.0]))

        def at_gamma(q):
            def run(X, Y):
                raw = method.solve(X, Y, grid=grid)
                return CoefficientPath(f"relaxo-g{raw.gammas[q]:g}", raw.betas[:, q, :],
                                       {"lambda": raw.base.lambdas})
            return run

        return {"relaxo-g0.5": at_gamma(1), "relaxo-g0": at_gamma(2)}
    return {token: create_method(token, settings).fitter(grid=grid, seed=seed)}
