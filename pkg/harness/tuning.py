"""
Tuning rules: pick one point on a coefficient path.

- tune_validation: per repetition, smallest validation error
- tune_oracle: one index shared by all repetitions, smallest average risk
"""

import math
from typing import Sequence

import numpy as np

from config import get_logger
from datagen import Dataset, GroundTruth
from errors import TuningError
from solvers import CoefficientPath

logger = get_logger(__name__)

TUNING_RULES = ("val", "oracle")


def validation_errors(path: CoefficientPath, val: Dataset) -> np.ndarray:
    residuals = val.Y[:, None] - val.X @ path.betas.T
    return np.einsum("ij,ij->j", residuals, residuals)


def tune_validation(path: CoefficientPath, val: Dataset) -> int:
    """
    Index minimizing ||Y_val - X_val beta||^2; ties go to the sparser fit,
    then to the lower index.
    """
    if len(path) == 0:
        raise TuningError("cannot tune an empty path")
    if path.p != val.p:
        raise TuningError(f"path has p={path.p} but validation data has p={val.p}")
    errors = validation_errors(path, val)
    order = np.lexsort((np.arange(len(path)), path.nnz, errors))
    return int(order[0])


def tune_oracle(paths: Sequence[CoefficientPath], truth: GroundTruth) -> int:
    """
    Single index minimizing the across-repetition average of
    (beta - beta0)' Sigma (beta - beta0). Averages are exactly rounded sums,
    so the choice does not depend on repetition order; ties go to the lower
    index.

    Raises:
        TuningError: no paths, or paths of differing length or width
    """
    if not paths:
        raise TuningError("oracle tuning needs at least one path")
    shapes = {path.betas.shape for path in paths}
    if len(shapes) != 1:
        raise TuningError(f"oracle tuning needs a common grid, got shapes {sorted(shapes)}")

    risks = np.array([truth.sigma.quad_forms(path.betas - truth.beta0) for path in paths])
    averages = np.array([math.fsum(column) / len(paths) for column in risks.T])
    index = int(np.argmin(averages))
    logger.debug(f"oracle index {index} over {len(paths)} repetitions")
    return index
