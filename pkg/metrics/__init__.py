# metrics/__init__.py

"""
Accuracy metrics against the ground truth and Monte Carlo degrees of freedom.
"""

from .accuracy import (
    METRIC_NAMES,
    MetricRecord,
    nnz,
    path_relative_risks,
    pve,
    relative_risk,
    relative_test_error,
    risk,
    score,
)
from .dof import DfCurve, covariance_df, df_montecarlo, null_fitter, ols_fitter

__all__ = [
    "METRIC_NAMES",
    "MetricRecord",
    "nnz",
    "path_relative_risks",
    "pve",
    "relative_risk",
    "relative_test_error",
    "risk",
    "score",
    "DfCurve",
    "covariance_df",
    "df_montecarlo",
    "null_fitter",
    "ols_fitter",
]
