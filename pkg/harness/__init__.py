# harness/__init__.py

"""
Simulation harness: per-repetition LangGraph pipeline, tuning rules,
aggregation and CSV reports.
"""

from .settings import HarnessSettings
from .methods import METHODS, MethodFit, PathMethod, create_method, df_fitters, parse_methods
from .tuning import TUNING_RULES, tune_oracle, tune_validation, validation_errors
from .aggregate import LONG_COLUMNS, SUMMARY_COLUMNS, aggregate, summarize
from .orchestrator import RunResult, build_repetition_graph, path_risk_curves, run_scenario
from .reports import (
    LONG_FILE,
    RISK_CURVE_COLUMNS,
    RISK_CURVE_FILE,
    SUMMARY_FILE,
    TIMING_FILE,
    check_outputs,
    figure_tables,
    read_long_csv,
    risk_curve_frame,
    timing_frame,
    write_csv,
)

__all__ = [
    "HarnessSettings",
    "METHODS",
    "MethodFit",
    "PathMethod",
    "create_method",
    "df_fitters",
    "parse_methods",
    "TUNING_RULES",
    "tune_oracle",
    "tune_validation",
    "validation_errors",
    "LONG_COLUMNS",
    "SUMMARY_COLUMNS",
    "aggregate",
    "summarize",
    "RunResult",
    "build_repetition_graph",
    "path_risk_curves",
    "run_scenario",
    "LONG_FILE",
    "RISK_CURVE_COLUMNS",
    "RISK_CURVE_FILE",
    "SUMMARY_FILE",
    "TIMING_FILE",
    "check_outputs",
    "figure_tables",
    "read_long_csv",
    "risk_curve_frame",
    "timing_frame",
    "write_csv",
]
