"""
Lasso path by cyclic coordinate descent with warm starts.

The objective is f(beta) = 1/2 ||Y - X beta||^2 + lambda ||beta||_1, so the
smallest lambda giving the zero solution is ||X^T Y||_inf. Updates use the
Gram matrix ("covariance updates"): the gradient X^T r is kept current with
one row of X^T X per coordinate change.
"""

from dataclasses import dataclass
from typing import List, Optional
import warnings

import numpy as np

from config import get_logger
from errors import ConvergenceError, DegenerateGridWarning
from .paths import CoefficientPath

logger = get_logger(__name__)

CHANGE_TOL = 1e-9
KKT_TARGET = 1e-8
MAX_SWEEPS = 100_000


def lambda_max(X: np.ndarray, Y: np.ndarray) -> float:
    return float(np.max(np.abs(X.T @ Y)))


def lambda_grid(X: np.ndarray, Y: np.ndarray, m: int = 100, eps: float = 1e-4) -> np.ndarray:
    """
    m log-spaced penalties from ||X^T Y||_inf down to eps times that value.

    When X^T Y is zero every penalty gives the zero fit; the grid collapses to
    the single point 0 and a DegenerateGridWarning is issued.
    """
    if X.size == 0 or Y.size == 0:
        raise ValueError("X and Y must be non-empty")
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")

    lam_max = lambda_max(X, Y)
    if lam_max == 0:
        logger.warning("⚠️ X^T Y is zero, lambda grid collapses to {0}")
        warnings.warn("X^T Y is zero; lambda grid is {0}", DegenerateGridWarning, stacklevel=2)
        return np.array([0.0])

    grid = np.geomspace(lam_max, eps * lam_max, m)
    grid[0] = lam_max
    return grid


def soft_threshold(z, lam):
    return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)


def objective(X: np.ndarray, Y: np.ndarray, beta: np.ndarray, lam: float) -> float:
    r = Y - X @ beta
    return 0.5 * float(r @ r) + lam * float(np.abs(beta).sum())


def kkt_residual(X: np.ndarray, Y: np.ndarray, beta: np.ndarray, lam: float) -> float:
    """
    Largest violation of the lasso optimality conditions.

    Inactive coordinates need |X_j^T r| <= lambda; active ones need
    sign(beta_j) X_j^T r == lambda.
    """
    grad = X.T @ (Y - X @ beta)
    return _kkt_from_gradient(grad, beta, lam)


def _kkt_from_gradient(grad: np.ndarray, beta: np.ndarray, lam: float) -> float:
    active = beta != 0
    inactive_gap = np.maximum(np.abs(grad[~active]) - lam, 0.0)
    active_gap = np.abs(np.sign(beta[active]) * grad[active] - lam)
    return float(max(inactive_gap.max(initial=0.0), active_gap.max(initial=0.0)))


class CoordinateDescent:
    """
    Reusable solver state for one (X, Y) pair.

    The Gram matrix and X^T Y are formed once, so a whole path shares them.
    """

    def __init__(self, X: np.ndarray, Y: np.ndarray):
        self.X = X
        self.Y = Y
        self.gram = X.T @ X
        self.xty = X.T @ Y
        self.diag = np.diag(self.gram).copy()
        self.lam_max = float(np.max(np.abs(self.xty)))
        self.usable = self.diag > 0

    @property
    def p(self) -> int:
        return self.gram.shape[0]

    def _sweep(self, beta: np.ndarray, grad: np.ndarray, lam: float, coords) -> float:
        gram, diag = self.gram, self.diag
        max_change = 0.0
        for j in coords:
            old = beta[j]
            z = grad[j] + diag[j] * old
            if z > lam:
                new = (z - lam) / diag[j]
            elif z < -lam:
                new = (z + lam) / diag[j]
            else:
                new = 0.0
            if new != old:
                delta = new - old
                beta[j] = new
                grad -= delta * gram[j]
                if abs(delta) > max_change:
                    max_change = abs(delta)
        return max_change

    def solve(self, lam: float, warm: Optional[np.ndarray] = None,
              max_sweeps: int = MAX_SWEEPS) -> "tuple[np.ndarray, int]":
        """
        Minimize the lasso objective at one penalty.

        Returns:
            (beta, sweeps) where sweeps counts passes over the working set

        Raises:
            ConvergenceError: the sweep cap was reached first
        """
        if lam < 0:
            raise ValueError(f"lambda must be >= 0, got {lam}")
        if lam >= self.lam_max:
            return np.zeros(self.p), 0

        beta = np.zeros(self.p) if warm is None else np.array(warm, dtype=float)
        beta[~self.usable] = 0.0
        target = KKT_TARGET * (1.0 + lam)
        working = set(np.flatnonzero(beta).tolist())
        sweeps = 0

        while True:
            grad = self.xty - self.gram @ beta
            violators = self.usable & (beta == 0) & (np.abs(grad) - lam > target)
            gap = _kkt_from_gradient(grad, beta, lam)
            if gap <= target and not violators.any() and sweeps > 0:
                return beta, sweeps
            if sweeps >= max_sweeps:
                raise ConvergenceError(
                    f"coordinate descent did not converge in {max_sweeps} sweeps at lambda={lam:.6g} "
                    f"(KKT residual {gap:.3g})",
                    beta=beta, kkt_residual=gap, lam=lam,
                )

            working.update(np.flatnonzero(violators).tolist())
            coords = sorted(working)
            while sweeps < max_sweeps:
                change = self._sweep(beta, grad, lam, coords)
                sweeps += 1
                if change <= CHANGE_TOL * (1.0 + np.max(np.abs(beta))):
                    break


def lasso_fit(X: np.ndarray, Y: np.ndarray, lam: float, warm: Optional[np.ndarray] = None,
              max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """
    Lasso coefficients at a single penalty.

    Args:
        X: Design matrix (n x p)
        Y: Response (n)
        lam: Penalty, >= 0
        warm: Optional starting coefficients
        max_sweeps: Iteration cap

    Returns:
        Coefficient vector of length p
    """
    beta, _ = CoordinateDescent(X, Y).solve(lam, warm=warm, max_sweeps=max_sweeps)
    return beta


@dataclass(eq=False)
class LassoPath:
    lambdas: np.ndarray
    betas: np.ndarray
    supports: List[np.ndarray]
    sweeps: np.ndarray

    def __len__(self) -> int:
        return len(self.lambdas)

    def objectives(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return np.array([objective(X, Y, b, lam) for b, lam in zip(self.betas, self.lambdas)])

    def as_coefficient_path(self) -> CoefficientPath:
        return CoefficientPath("lasso", self.betas, {"lambda": self.lambdas})


def lasso_path(X: np.ndarray, Y: np.ndarray, grid: np.ndarray,
               max_sweeps: int = MAX_SWEEPS) -> LassoPath:
    """
    Solve along a decreasing penalty grid, each point warm-started from the last.

    Raises:
        ConvergenceError: carrying the index of the grid point that failed
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty vector")
    if np.any(np.diff(grid) >= 0):
        raise ValueError("grid must be strictly decreasing")

    solver = CoordinateDescent(X, Y)
    betas = np.zeros((grid.size, solver.p))
    sweeps = np.zeros(grid.size, dtype=int)
    warm = None
    for i, lam in enumerate(grid):
        try:
            beta, sweeps[i] = solver.solve(lam, warm=warm, max_sweeps=max_sweeps)
        except ConvergenceError as e:
            e.grid_index = i
            logger.error(f"❌ Lasso path failed at grid index {i} (lambda={lam:.6g})")
            raise
        betas[i] = beta
        warm = beta

    supports = [np.flatnonzero(b) for b in betas]
    logger.debug(f"✅ Lasso path: {grid.size} points, {int(sweeps.sum())} sweeps, "
                 f"final support size {supports[-1].size}")
    return LassoPath(lambdas=grid, betas=betas, supports=supports, sweeps=sweeps)
