"""
Best subset selection: minimize ||Y - X beta||^2 subject to ||beta||_0 <= k.

Two solvers share the SubsetSolution result type:

- iht / warm_start: projected gradient with hard thresholding from several
  starting points, an approximate solver used to seed the exact search
- best_subset: best-first branch-and-bound. The bound of a node is the RSS of
  unconstrained least squares on its forced-in plus free columns, which drops
  the cardinality cap and so never exceeds the RSS of a feasible completion.

bs_path runs best_subset for k = 0..kmax with a wall-clock budget per k.
"""

from dataclasses import dataclass, field, replace
import heapq
import itertools
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import get_logger
from errors import SparseBenchError
from .paths import CoefficientPath
from .relaxed import active_least_squares

logger = get_logger(__name__)

PRUNE_TOL = 1e-10
DEFAULT_RESTARTS = 50
IHT_MAX_ITER = 1000
IHT_TOL = 1e-7


@dataclass(eq=False)
class SubsetSolution:
    beta: np.ndarray
    support: np.ndarray
    rss: float
    certified: bool = False
    nodes_explored: int = 0
    wall_time: float = 0.0
    k: Optional[int] = None
    error: Optional[str] = None

    @property
    def size(self) -> int:
        return int(self.support.size)

    def better_than(self, other: Optional["SubsetSolution"]) -> bool:
        """Lower RSS wins; exact ties go to the lexicographically smaller support."""
        if other is None:
            return True
        if self.rss != other.rss:
            return self.rss < other.rss
        return tuple(self.support.tolist()) < tuple(other.support.tolist())


@dataclass(eq=False)
class BnbNode:
    forced_in: Tuple[int, ...]
    forced_out: Tuple[int, ...]
    bound: float
    relaxation: np.ndarray = field(repr=False)
    incumbent: float = np.inf  # incumbent RSS when the node was explored

    def free(self, p: int) -> np.ndarray:
        mask = np.ones(p, dtype=bool)
        mask[list(self.forced_in)] = False
        mask[list(self.forced_out)] = False
        return np.flatnonzero(mask)

    def candidates(self, p: int) -> np.ndarray:
        return np.union1d(np.asarray(self.forced_in, dtype=int), self.free(p))


def residual_ss(X: np.ndarray, Y: np.ndarray, beta: np.ndarray) -> float:
    r = Y - X @ beta
    return float(r @ r)


def hard_threshold(v: np.ndarray, k: int) -> np.ndarray:
    """Keep the k largest-magnitude entries of v, ties going to the lowest index."""
    out = np.zeros_like(v, dtype=float)
    if k <= 0:
        return out
    keep = np.argsort(-np.abs(v), kind="stable")[:k]
    out[keep] = v[keep]
    return out


def polish(X: np.ndarray, Y: np.ndarray, support: Sequence[int], k: Optional[int] = None) -> SubsetSolution:
    """Exact least squares on a support."""
    support = np.sort(np.asarray(support, dtype=int))
    beta = active_least_squares(X, support, Y)
    return SubsetSolution(beta=beta, support=support, rss=residual_ss(X, Y, beta), k=k)


def zero_solution(Y: np.ndarray, p: int, k: int = 0, certified: bool = True) -> SubsetSolution:
    return SubsetSolution(
        beta=np.zeros(p),
        support=np.array([], dtype=int),
        rss=float(Y @ Y),
        certified=certified,
        k=k,
    )


def step_constant(X: np.ndarray) -> float:
    """Largest squared singular value of X."""
    return float(np.linalg.norm(X, 2) ** 2)


def iht(X: np.ndarray, Y: np.ndarray, k: int, init: Optional[np.ndarray] = None,
        max_iter: int = IHT_MAX_ITER, tol: float = IHT_TOL, L: Optional[float] = None,
        history: Optional[List[float]] = None) -> SubsetSolution:
    """
    Iterative hard thresholding with step 1/L, then least squares on the final support.

    The starting point is projected onto the k-sparse set first, so the
    objective 1/2 ||Y - X beta||^2 never increases. Iteration stops when its
    relative change is at most tol or after max_iter steps. Objective values
    are appended to history when given.
    """
    n, p = X.shape
    if not 1 <= k <= p:
        raise ValueError(f"k must satisfy 1 <= k <= p = {p}, got {k}")
    if not X.any():
        return zero_solution(Y, p, k=k, certified=False)

    L = step_constant(X) if L is None else L
    beta = hard_threshold(np.zeros(p) if init is None else np.asarray(init, dtype=float), k)
    obj = 0.5 * residual_ss(X, Y, beta)
    if history is not None:
        history.append(obj)

    for _ in range(max_iter):
        grad = X.T @ (X @ beta - Y)
        beta = hard_threshold(beta - grad / L, k)
        new_obj = 0.5 * residual_ss(X, Y, beta)
        if history is not None:
            history.append(new_obj)
        done = obj == 0 or abs(obj - new_obj) <= tol * obj
        obj = new_obj
        if done:
            break

    return polish(X, Y, np.flatnonzero(beta), k=k)


def warm_start(X: np.ndarray, Y: np.ndarray, k: int, restarts: int = DEFAULT_RESTARTS,
               stream: Optional[np.random.Generator] = None, max_iter: int = IHT_MAX_ITER,
               tol: float = IHT_TOL, deadline: Optional[float] = None) -> SubsetSolution:
    """
    Best polished IHT solution over the zero start and `restarts` random starts.

    Random starts have i.i.d. N(0, 1) entries scaled by ||X^T Y||_inf / L and
    are all drawn before any run, so the stream is consumed the same way
    whether or not the deadline (a time.perf_counter value) cuts the runs short.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    n, p = X.shape
    if not X.any():
        return zero_solution(Y, p, k=k, certified=False)

    stream = np.random.default_rng(0) if stream is None else stream
    L = step_constant(X)
    scale = float(np.max(np.abs(X.T @ Y))) / L
    inits = [np.zeros(p)] + [stream.standard_normal(p) * scale for _ in range(restarts)]

    best = None
    for run, init in enumerate(inits):
        if deadline is not None and best is not None and time.perf_counter() >= deadline:
            logger.debug(f"warm start for k={k} stopped by deadline after {run} runs")
            break
        candidate = iht(X, Y, k, init=init, max_iter=max_iter, tol=tol, L=L)
        if candidate.better_than(best):
            best = candidate
    return best


def _relax(X: np.ndarray, Y: np.ndarray, columns: np.ndarray) -> Tuple[np.ndarray, float]:
    beta = active_least_squares(X, columns, Y)
    return beta, residual_ss(X, Y, beta)


def best_subset(X: np.ndarray, Y: np.ndarray, k: int, budget: float,
                stream: Optional[np.random.Generator] = None,
                restarts: int = DEFAULT_RESTARTS, max_iter: int = IHT_MAX_ITER,
                tol: float = IHT_TOL, max_nodes: Optional[int] = None,
                incumbent: Optional[SubsetSolution] = None,
                trace: Optional[List[BnbNode]] = None) -> SubsetSolution:
    """
    Best subset of size at most k by best-first branch-and-bound.

    Args:
        X, Y: Design and response
        k: Subset size, 0 <= k <= p
        budget: Wall-clock seconds for warm start plus search; <= 0 returns
            the warm-start solution uncertified
        stream: Generator for the random warm starts
        restarts, max_iter, tol: Warm-start settings
        max_nodes: Optional cap on explored nodes
        incumbent: Optional known feasible solution, e.g. the one for k - 1
        trace: When given, every explored node is appended

    Returns:
        SubsetSolution, certified when the search exhausted the tree
    """
    start = time.perf_counter()
    n, p = X.shape
    if not 0 <= k <= p:
        raise ValueError(f"k must satisfy 0 <= k <= p = {p}, got {k}")
    if k == 0 or not X.any():
        return replace(zero_solution(Y, p, k=k), wall_time=time.perf_counter() - start)

    deadline = start + budget if budget > 0 else None
    best = warm_start(X, Y, k, restarts=restarts, stream=stream, max_iter=max_iter, tol=tol,
                      deadline=deadline)
    if incumbent is not None and incumbent.size <= k and incumbent.better_than(best):
        best = replace(incumbent)
    best.k = k

    if budget <= 0:
        logger.debug(f"best subset k={k}: no search budget, returning warm start")
        return replace(best, certified=False, nodes_explored=0, wall_time=time.perf_counter() - start)

    root_beta, root_rss = _relax(X, Y, np.arange(p))
    counter = itertools.count()
    heap = [(root_rss, next(counter), BnbNode((), (), root_rss, root_beta))]
    nodes = 0
    certified = True

    while heap:
        if heap[0][0] >= best.rss - PRUNE_TOL:
            break
        if time.perf_counter() >= deadline or (max_nodes is not None and nodes >= max_nodes):
            certified = False
            break

        _, _, node = heapq.heappop(heap)
        node.incumbent = best.rss
        nodes += 1
        if trace is not None:
            trace.append(node)

        candidates = node.candidates(p)
        if candidates.size <= k or len(node.forced_in) == k:
            columns = candidates if candidates.size <= k else np.asarray(node.forced_in, dtype=int)
            leaf = polish(X, Y, columns, k=k)
            if leaf.better_than(best):
                best = leaf
            continue

        free = node.free(p)
        weights = np.abs(node.relaxation[free])

        # Rounding the relaxation to its largest entries gives a feasible point.
        room = k - len(node.forced_in)
        rounded = free[np.argsort(-weights, kind="stable")[:room]]
        guess = polish(X, Y, np.concatenate([np.asarray(node.forced_in, dtype=int), rounded]), k=k)
        if guess.better_than(best):
            best = guess

        j = int(free[np.argmax(weights)])
        keep = BnbNode(node.forced_in + (j,), node.forced_out, node.bound, node.relaxation)
        heapq.heappush(heap, (keep.bound, next(counter), keep))

        dropped = node.forced_out + (j,)
        columns = candidates[candidates != j]
        beta, rss = _relax(X, Y, columns)
        if rss < best.rss - PRUNE_TOL:
            heapq.heappush(heap, (rss, next(counter), BnbNode(node.forced_in, dropped, rss, beta)))

    wall = time.perf_counter() - start
    if certified:
        logger.debug(f"✅ best subset k={k}: certified after {nodes} nodes in {wall:.3f}s")
    else:
        logger.info(f"⏱️ best subset k={k}: budget reached after {nodes} nodes, returning incumbent")
    return replace(best, k=k, certified=certified, nodes_explored=nodes, wall_time=wall)


@dataclass(eq=False)
class SubsetPath:
    solutions: List[SubsetSolution]

    def __len__(self) -> int:
        return len(self.solutions)

    @property
    def certified_count(self) -> int:
        return sum(1 for s in self.solutions if s.certified)

    @property
    def betas(self) -> np.ndarray:
        return np.array([s.beta for s in self.solutions])

    @property
    def rss(self) -> np.ndarray:
        return np.array([s.rss for s in self.solutions])

    @property
    def wall_time(self) -> float:
        return float(sum(s.wall_time for s in self.solutions))

    def as_coefficient_path(self) -> CoefficientPath:
        return CoefficientPath("bs", self.betas, {"k": np.arange(len(self))})


def bs_path(X: np.ndarray, Y: np.ndarray, kmax: int, budget_per_k: float,
            stream: Optional[np.random.Generator] = None,
            restarts: int = DEFAULT_RESTARTS, max_iter: int = IHT_MAX_ITER,
            tol: float = IHT_TOL, max_nodes: Optional[int] = None) -> SubsetPath:
    """
    Best subset solutions for k = 0..kmax.

    Each search is seeded with the previous size's solution, so RSS never
    increases along the path. A size whose search fails is recorded as an
    uncertified copy of the previous solution carrying the error message;
    the path always runs to kmax.
    """
    n, p = X.shape
    if not 1 <= kmax <= p:
        raise ValueError(f"kmax must satisfy 1 <= kmax <= p = {p}, got {kmax}")
    stream = np.random.default_rng(0) if stream is None else stream

    solutions = [zero_solution(Y, p, k=0)]
    for k in range(1, kmax + 1):
        previous = solutions[-1]
        try:
            solution = best_subset(X, Y, k, budget_per_k, stream=stream, restarts=restarts,
                                   max_iter=max_iter, tol=tol, max_nodes=max_nodes,
                                   incumbent=previous)
        except (SparseBenchError, ValueError, np.linalg.LinAlgError) as e:
            logger.error(f"❌ best subset failed at k={k}: {e}")
            solution = replace(previous, k=k, certified=False, nodes_explored=0, wall_time=0.0,
                               error=str(e))
        solutions.append(solution)

    path = SubsetPath(solutions)
    logger.debug(f"best subset path: {path.certified_count}/{kmax + 1} certified, "
                 f"{path.wall_time:.2f}s")
    return path
