"""
Dataset CSV exchange: columns x1..xp followed by y.
"""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from config import get_logger
from errors import DatasetFormatError
from .sampling import Dataset

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"


def dataset_to_frame(dataset: Dataset) -> pd.DataFrame:
    columns = [f"x{j + 1}" for j in range(dataset.p)]
    frame = pd.DataFrame(dataset.X, columns=columns)
    frame["y"] = dataset.Y
    return frame


def write_dataset_csv(dataset: Dataset, path: Union[str, Path]) -> Path:
    path = Path(path)
    dataset_to_frame(dataset).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"💾 Wrote dataset n={dataset.n}, p={dataset.p} to {path}")
    return path


def read_dataset_csv(path: Union[str, Path]) -> Dataset:
    """
    Read a dataset written by write_dataset_csv (or any CSV with a y column
    and x1..xp columns).

    Raises:
        DatasetFormatError: ragged rows, non-numeric or missing cells (with the
            1-based data row), missing y or x columns
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise DatasetFormatError(f"{path}: ragged rows: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise DatasetFormatError(f"{path}: file is empty") from e

    if "y" not in frame.columns:
        raise DatasetFormatError(f"{path}: missing 'y' column")
    x_columns = [c for c in frame.columns if c != "y"]
    expected = [f"x{j + 1}" for j in range(len(x_columns))]
    if not x_columns or sorted(x_columns, key=_column_order) != expected:
        raise DatasetFormatError(f"{path}: predictor columns must be x1..xp, got {x_columns}")
    if frame.empty:
        raise DatasetFormatError(f"{path}: no data rows")

    values = frame[expected + ["y"]].apply(pd.to_numeric, errors="coerce")
    bad = values.isna().to_numpy() | ~np.isfinite(values.to_numpy(dtype=float))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        column = (expected + ["y"])[col]
        cell = frame[column].iloc[row]
        raise DatasetFormatError(
            f"{path}: row {row + 1}, column '{column}': non-numeric or missing value {cell!r}",
            row=int(row) + 1,
        )

    # float() on the raw strings round-trips %.17g output exactly.
    array = frame[expected + ["y"]].to_numpy().astype(float)
    return Dataset(X=np.ascontiguousarray(array[:, :-1]), Y=array[:, -1].copy())


def _column_order(name: str) -> int:
    try:
        return int(name[1:]) if name.startswith("x") else -1
    except ValueError:
        return -1
