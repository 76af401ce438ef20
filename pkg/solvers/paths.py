"""
Method-agnostic coefficient path used by tuning and scoring.
"""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np


@dataclass(eq=False)
class CoefficientPath:
    """
    Ordered coefficient vectors with the tuning values that produced them.

    Attributes:
        method: Method token (lasso, relaxo, fs, bs)
        betas: Array of shape (m, p), one row per tuning point
        labels: Column name -> length-m array of tuning values, e.g.
            {"lambda": ...}, {"lambda": ..., "gamma": ...} or {"k": ...}
    """
    method: str
    betas: np.ndarray
    labels: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.betas = np.atleast_2d(np.asarray(self.betas, dtype=float))
        for name, values in self.labels.items():
            if len(values) != len(self):
                raise ValueError(f"label '{name}' has {len(values)} entries for a path of length {len(self)}")

    def __len__(self) -> int:
        return self.betas.shape[0]

    @property
    def p(self) -> int:
        return self.betas.shape[1]

    @property
    def nnz(self) -> np.ndarray:
        return np.count_nonzero(self.betas, axis=1)

    def label(self, index: int) -> Dict[str, Any]:
        return {name: values[index].item() for name, values in self.labels.items()}
