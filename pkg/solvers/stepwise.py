"""
Forward stepwise selection as a guided QR decomposition.

The state keeps an orthonormal basis Q of the active columns, the triangular
factor R, every remaining column orthogonalized against the active set
(modified Gram-Schmidt) and the current residual. One step scores all
remaining columns in O(n (p - k)) and folds the winner into the
factorization in O(n (p - k)).
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg

from config import get_logger
from errors import DegenerateColumnError
from .paths import CoefficientPath

logger = get_logger(__name__)

# A column whose orthogonalized norm falls to this fraction of its raw norm
# is treated as collinear with the active set.
COLLINEARITY_TOL = 1e-10

# Scores within this relative distance of the best one count as tied.
TIE_TOL = 1e-10


@dataclass(eq=False)
class QRState:
    Q: np.ndarray            # n x capacity, first k columns orthonormal
    R: np.ndarray            # capacity x p, R[i, j] = q_i' X_j as accumulated by MGS
    W: np.ndarray            # n x p, columns orthogonalized against the active set
    residual: np.ndarray     # P_perp Y
    qty: np.ndarray          # coordinates of Y in Q
    col_norms: np.ndarray    # ||X_j||
    active: List[int] = field(default_factory=list)
    excluded: set = field(default_factory=set)

    @property
    def k(self) -> int:
        return len(self.active)

    @property
    def rss(self) -> float:
        return float(self.residual @ self.residual)

    def triangular(self) -> np.ndarray:
        """Upper-triangular R_A with X_A = Q_A R_A."""
        return np.triu(self.R[:self.k][:, self.active])

    def coefficients(self) -> np.ndarray:
        """Least squares coefficients on the active set, zero-padded to length p."""
        beta = np.zeros(self.W.shape[1])
        if self.k:
            beta[self.active] = scipy.linalg.solve_triangular(self.triangular(), self.qty[:self.k])
        return beta

    def candidates(self) -> np.ndarray:
        """Boolean mask of columns still eligible for entry."""
        mask = np.ones(self.W.shape[1], dtype=bool)
        mask[self.active] = False
        if self.excluded:
            mask[list(self.excluded)] = False
        norms = np.linalg.norm(self.W, axis=0)
        mask &= norms > COLLINEARITY_TOL * self.col_norms
        return mask

    def scores(self) -> np.ndarray:
        """|W_j' r| / ||W_j|| for candidates, -inf elsewhere."""
        mask = self.candidates()
        out = np.full(self.W.shape[1], -np.inf)
        if mask.any():
            W = self.W[:, mask]
            out[mask] = np.abs(W.T @ self.residual) / np.linalg.norm(W, axis=0)
        return out


def qr_init(X: np.ndarray, Y: np.ndarray, capacity: int) -> QRState:
    n, p = X.shape
    return QRState(
        Q=np.zeros((n, capacity)),
        R=np.zeros((capacity, p)),
        W=np.array(X, dtype=float, copy=True),
        residual=np.array(Y, dtype=float, copy=True),
        qty=np.zeros(capacity),
        col_norms=np.linalg.norm(X, axis=0),
    )


def qr_insert(state: QRState, column: int) -> QRState:
    """
    Add one column to the factorization.

    The orthogonalized column is re-orthogonalized once against Q before
    normalizing; the remaining columns and the residual are then swept
    against the new basis vector.

    Raises:
        DegenerateColumnError: the orthogonalized norm is below the
            collinearity threshold
    """
    if column in state.active:
        raise ValueError(f"column {column} is already in the factorization")
    k = state.k
    if k >= state.Q.shape[1]:
        raise ValueError(f"factorization is full ({k} columns)")

    w = state.W[:, column].copy()
    if k:
        Qk = state.Q[:, :k]
        correction = Qk.T @ w
        w -= Qk @ correction
        state.R[:k, column] += correction
    norm = float(np.linalg.norm(w))
    if norm <= COLLINEARITY_TOL * state.col_norms[column]:
        raise DegenerateColumnError(f"column {column} is collinear with the active set", column=column)

    q = w / norm
    state.Q[:, k] = q
    state.R[k, column] = norm
    state.W[:, column] = 0.0

    rest = np.ones(state.W.shape[1], dtype=bool)
    rest[state.active] = False
    rest[column] = False
    coeff = q @ state.W[:, rest]
    state.W[:, rest] -= np.outer(q, coeff)
    state.R[k, rest] = coeff

    z = float(q @ state.residual)
    state.residual -= z * q
    state.qty[k] = z
    state.active.append(int(column))
    return state


@dataclass(eq=False)
class StepwisePath:
    order: np.ndarray
    scores: np.ndarray
    betas: np.ndarray   # (K + 1) x p, row 0 is the empty model
    rss: np.ndarray
    truncated: bool = False

    def __len__(self) -> int:
        return self.betas.shape[0]

    def as_coefficient_path(self) -> CoefficientPath:
        return CoefficientPath("fs", self.betas, {"k": np.arange(len(self))})


def fs_path(X: np.ndarray, Y: np.ndarray, kmax: Optional[int] = None) -> StepwisePath:
    """
    Forward stepwise path up to kmax variables.

    At each step the entering column maximizes |X_j' P_perp Y| / ||P_perp X_j||
    over the columns not yet active, ties (scores within a relative TIE_TOL
    of the best) going to the lowest index. The path stops early, flagged
    as truncated, when every remaining column is collinear with the active
    set.
    """
    n, p = X.shape
    limit = min(n, p)
    if kmax is None:
        kmax = min(limit, 50)
    if not 1 <= kmax <= limit:
        raise ValueError(f"kmax must satisfy 1 <= kmax <= min(n, p) = {limit}, got {kmax}")

    state = qr_init(X, Y, kmax)
    betas = [np.zeros(p)]
    rss = [state.rss]
    order, scores = [], []
    truncated = False

    while state.k < kmax:
        step_scores = state.scores()
        if not np.isfinite(step_scores).any():
            truncated = True
            logger.warning(f"⚠️ Forward stepwise truncated at k={state.k}: remaining columns are collinear")
            break
        best = step_scores.max()
        j = int(np.flatnonzero(step_scores >= best * (1.0 - TIE_TOL))[0])
        try:
            qr_insert(state, j)
        except DegenerateColumnError:
            state.excluded.add(j)
            continue
        order.append(j)
        scores.append(float(step_scores[j]))
        betas.append(state.coefficients())
        rss.append(state.rss)

    return StepwisePath(
        order=np.array(order, dtype=int),
        scores=np.array(scores),
        betas=np.array(betas),
        rss=np.array(rss),
        truncated=truncated,
    )
