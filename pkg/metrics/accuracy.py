"""
Out-of-sample accuracy metrics against the known ground truth.

With risk(b) = (b - beta0)' Sigma (b - beta0) and nu the SNR:

    RR  = risk / beta0' Sigma beta0
    RTE = (risk + sigma2) / sigma2      = RR * nu + 1
    PVE = 1 - (risk + sigma2) / (beta0' Sigma beta0 + sigma2) = 1 - RTE / (nu + 1)

RTE and PVE are computed from RR through these identities, so the null fit
scores exactly 1, nu + 1 and 0.
"""

from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from datagen import GroundTruth

METRIC_NAMES = ("rr", "rte", "pve", "nnz")


def risk(beta: np.ndarray, truth: GroundTruth) -> float:
    return truth.sigma.quad_form(np.asarray(beta, dtype=float) - truth.beta0)


def relative_risk(beta: np.ndarray, truth: GroundTruth) -> float:
    return risk(beta, truth) / truth.signal_variance


def relative_test_error(beta: np.ndarray, truth: GroundTruth) -> float:
    return relative_risk(beta, truth) * truth.snr + 1.0


def pve(beta: np.ndarray, truth: GroundTruth) -> float:
    return 1.0 - relative_test_error(beta, truth) / (truth.snr + 1.0)


def nnz(beta: np.ndarray) -> int:
    """Exact count of nonzero entries."""
    return int(np.count_nonzero(beta))


def path_relative_risks(betas: np.ndarray, truth: GroundTruth) -> np.ndarray:
    """Relative risk of every row of an (m x p) coefficient stack."""
    return truth.sigma.quad_forms(np.atleast_2d(betas) - truth.beta0) / truth.signal_variance


@dataclass(frozen=True)
class MetricRecord:
    """Scores of one tuned fit in one repetition."""
    method: str
    tuning_rule: str
    rep: int
    index: int
    rr: float
    rte: float
    pve: float
    nnz: int
    labels: Optional[Dict[str, float]] = None

    def values(self) -> Dict[str, float]:
        return {name: float(getattr(self, name)) for name in METRIC_NAMES}

    def rows(self) -> Iterator[Tuple[str, float]]:
        yield from self.values().items()


def score(beta: np.ndarray, truth: GroundTruth, method: str, tuning_rule: str,
          rep: int, index: int = -1, labels: Optional[Dict[str, float]] = None) -> MetricRecord:
    rr = relative_risk(beta, truth)
    rte = rr * truth.snr + 1.0
    return MetricRecord(
        method=method,
        tuning_rule=tuning_rule,
        rep=rep,
        index=index,
        rr=rr,
        rte=rte,
        pve=1.0 - rte / (truth.snr + 1.0),
        nnz=nnz(beta),
        labels=labels,
    )
