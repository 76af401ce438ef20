"""
CSV outputs: long-format metrics, summaries, timing and plot-ready tables.
"""

from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np
import pandas as pd

from config import get_logger
from errors import OutputExistsError, SchemaError
from .aggregate import LONG_COLUMNS, summarize

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"
LONG_FILE = "long.csv"
SUMMARY_FILE = "summary.csv"
TIMING_FILE = "timing.csv"
RISK_CURVE_FILE = "risk_curve.csv"
RISK_CURVE_COLUMNS = [
    "setting", "n", "p", "s", "beta_type", "rho", "snr",
    "method", "index", "rr_mean", "rr_se", "nnz_mean", "reps",
]
TIMING_COLUMNS = ["setting", "n", "p", "method", "seconds_mean", "seconds_se", "paths", "certified_mean"]

_TEXT_COLUMNS = {"setting": str, "method": str, "tuning_rule": str, "metric": str}


def check_outputs(out: Union[str, Path], names: Iterable[str], force: bool = False) -> Path:
    """Create the output directory; refuse to clobber existing files unless forced."""
    out = Path(out)
    existing = [name for name in names if (out / name).exists()]
    if existing and not force:
        raise OutputExistsError(f"{out}: {', '.join(existing)} already exist (use --force to overwrite)")
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="")
    logger.debug(f"💾 Wrote {len(frame)} rows to {path}")
    return path


def read_long_csv(paths: Sequence[Union[str, Path]]) -> pd.DataFrame:
    """
    Load and concatenate long-format metric CSVs.

    Raises:
        SchemaError: a file lacks a column, has an unexpected one, or holds a
            non-numeric value; the offending column is named
    """
    frames: List[pd.DataFrame] = []
    for path in paths:
        path = Path(path)
        try:
            frame = pd.read_csv(path, dtype=_TEXT_COLUMNS, keep_default_na=False, na_values=[""])
        except pd.errors.EmptyDataError as e:
            raise SchemaError(f"{path}: file is empty") from e
        columns = list(frame.columns)
        for column in LONG_COLUMNS:
            if column not in columns:
                raise SchemaError(f"{path}: missing column '{column}'", column=column)
        for column in columns:
            if column not in LONG_COLUMNS:
                raise SchemaError(f"{path}: unexpected column '{column}'", column=column)
        for column in ("n", "p", "s", "beta_type", "rho", "snr", "rep", "value"):
            numeric = pd.to_numeric(frame[column], errors="coerce")
            if numeric.isna().any():
                raise SchemaError(f"{path}: non-numeric value in column '{column}'", column=column)
            frame[column] = numeric
        frames.append(frame[LONG_COLUMNS])
    if not frames:
        raise SchemaError("no input files")
    long = pd.concat(frames, ignore_index=True)
    logger.info(f"📥 Read {len(long)} metric rows from {len(frames)} file(s)")
    return long


def timing_frame(entries: Sequence[Dict]) -> pd.DataFrame:
    """
    Seconds per path by (setting, n, p, method); best subset rows also carry
    the mean number of certified solutions per path.

    Args:
        entries: dicts with setting, n, p, method, seconds and certified (or None)
    """
    if not entries:
        return pd.DataFrame(columns=TIMING_COLUMNS)
    frame = pd.DataFrame(entries)
    rows = []
    for (setting, n, p, method), group in frame.groupby(["setting", "n", "p", "method"], sort=True):
        stats = summarize(group["seconds"].to_numpy())
        certified = group["certified"].dropna()
        rows.append({
            "setting": setting, "n": n, "p": p, "method": method,
            "seconds_mean": stats["mean"], "seconds_se": stats["se"], "paths": stats["reps"],
            "certified_mean": float(certified.mean()) if len(certified) else np.nan,
        })
    return pd.DataFrame(rows, columns=TIMING_COLUMNS)


def figure_tables(summary: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    """
    One table per (setting, metric): rows (rho, snr, tuning_rule), a mean and
    an SE column per method, and the reference columns.
    """
    tables = {}
    for (setting, metric), group in summary.groupby(["setting", "metric"], sort=True):
        index = ["rho", "snr", "tuning_rule"]
        wide = group.pivot_table(index=index, columns="method", values=["mean", "se"], aggfunc="first",
                                 dropna=False)
        wide.columns = [f"{method}_{stat}" for stat, method in wide.columns]
        wide = wide[sorted(wide.columns)].reset_index()
        refs = group.groupby(index, sort=True)[["null_rte", "perfect_pve", "true_s"]].first().reset_index()
        tables[f"{setting}_{metric}"] = wide.merge(refs, on=index, how="left")
    return tables


def risk_curve_frame(rows: Sequence[Dict]) -> pd.DataFrame:
    """Relative risk and mean nonzero count at every path position, one row per (scenario, method, index)."""
    return pd.DataFrame(list(rows), columns=RISK_CURVE_COLUMNS)
