# solvers/__init__.py

"""
Sparse regression solvers.

- lasso: coordinate descent path and the simplified relaxed lasso
- stepwise: forward stepwise selection via an updated QR factorization
- subset: IHT warm starts and exact branch-and-bound best subset
"""

from .paths import CoefficientPath
from .lasso import LassoPath, lambda_grid, lambda_max, lasso_fit, lasso_path, kkt_residual
from .relaxed import RelaxedPath, active_least_squares, gamma_grid, relaxed_path
from .stepwise import QRState, StepwisePath, fs_path, qr_init, qr_insert
from .subset import (
    BnbNode,
    SubsetPath,
    SubsetSolution,
    best_subset,
    bs_path,
    hard_threshold,
    iht,
    warm_start,
)
from .export import export_path

__all__ = [
    "CoefficientPath",
    "LassoPath",
    "lambda_grid",
    "lambda_max",
    "lasso_fit",
    "lasso_path",
    "kkt_residual",
    "RelaxedPath",
    "active_least_squares",
    "gamma_grid",
    "relaxed_path",
    "QRState",
    "StepwisePath",
    "fs_path",
    "qr_init",
    "qr_insert",
    "BnbNode",
    "SubsetPath",
    "SubsetSolution",
    "best_subset",
    "bs_path",
    "hard_threshold",
    "iht",
    "warm_start",
    "export_path",
]
