"""
Across-repetition summaries of long-format metric rows.
"""

import math
from typing import Dict

import numpy as np
import pandas as pd

LONG_COLUMNS = [
    "setting", "n", "p", "s", "beta_type", "rho", "snr",
    "method", "tuning_rule", "rep", "metric", "value",
]
GROUP_KEYS = [c for c in LONG_COLUMNS if c not in ("rep", "value")]
SUMMARY_COLUMNS = GROUP_KEYS + ["mean", "se", "reps", "null_rte", "perfect_pve", "true_s"]


def summarize(values: np.ndarray) -> Dict[str, float]:
    """
    Mean, standard error (sample sd / sqrt(count)) and count.

    Sums are exactly rounded, so the result does not depend on the order of
    the values. Identical values give SE exactly 0; a single value gives no SE.
    """
    values = np.asarray(values, dtype=float)
    count = values.size
    if count == 0:
        return {"mean": np.nan, "se": np.nan, "reps": 0}
    if np.all(values == values[0]):
        return {"mean": float(values[0]), "se": 0.0 if count > 1 else np.nan, "reps": count}
    mean = math.fsum(values) / count
    if count < 2:
        return {"mean": mean, "se": np.nan, "reps": count}
    sd = math.sqrt(math.fsum((values - mean) ** 2) / (count - 1))
    return {"mean": mean, "se": sd / math.sqrt(count), "reps": count}


def aggregate(long: pd.DataFrame) -> pd.DataFrame:
    """
    Per (scenario, method, tuning rule, metric): mean, SE and repetition
    count, plus the reference values null_rte = snr + 1,
    perfect_pve = snr / (1 + snr) and true_s = s.
    """
    if long.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)

    frame = long.sort_values(GROUP_KEYS + ["rep", "value"], kind="mergesort")
    rows = []
    for keys, group in frame.groupby(GROUP_KEYS, sort=True):
        row = dict(zip(GROUP_KEYS, keys))
        row.update(summarize(group["value"].to_numpy()))
        rows.append(row)

    summary = pd.DataFrame(rows)
    summary["null_rte"] = summary["snr"] + 1.0
    summary["perfect_pve"] = summary["snr"] / (1.0 + summary["snr"])
    summary["true_s"] = summary["s"]
    return summary[SUMMARY_COLUMNS].reset_index(drop=True)
