"""
Exception hierarchy shared by every sparsebench package.

The CLI maps these to exit status 2 (input problems) and the API to HTTP 422.
"""

from typing import Optional

import numpy as np


class SparseBenchError(Exception):
    """Base class for all sparsebench errors."""


class ScenarioError(SparseBenchError, ValueError):
    """A scenario file could not be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, field: Optional[str] = None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.field = field


class DatasetFormatError(SparseBenchError, ValueError):
    """A dataset CSV has ragged rows, non-numeric cells or missing columns."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class ConvergenceError(SparseBenchError, RuntimeError):
    """Coordinate descent hit its sweep cap before meeting the KKT tolerance."""

    def __init__(self, message: str, beta: np.ndarray, kkt_residual: float,
                 lam: float, grid_index: Optional[int] = None):
        super().__init__(message)
        self.beta = beta
        self.kkt_residual = kkt_residual
        self.lam = lam
        self.grid_index = grid_index


class DegenerateColumnError(SparseBenchError, ArithmeticError):
    """A column is numerically inside the span of the active set."""

    def __init__(self, message: str, column: int):
        super().__init__(message)
        self.column = column


class TuningError(SparseBenchError, ValueError):
    """Tuning was asked to compare paths that do not share a grid."""


class DegreesOfFreedomError(SparseBenchError, RuntimeError):
    """Too many Monte Carlo repetitions failed to produce a fit."""

    def __init__(self, message: str, dropped: int, reps: int):
        super().__init__(message)
        self.dropped = dropped
        self.reps = reps


class SchemaError(SparseBenchError, ValueError):
    """An ingested CSV does not match the documented schema."""

    def __init__(self, message: str, column: Optional[str] = None):
        super().__init__(message)
        self.column = column


class OutputExistsError(SparseBenchError, FileExistsError):
    """Refusing to overwrite an existing output file without --force."""


class DegenerateGridWarning(UserWarning):
    """X^T Y is zero, so the lambda grid collapses to a single point."""
