"""
Ground truth, noise calibration and dataset sampling.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .coefficients import make_coefficients
from .covariance import AR1Covariance, make_covariance

# SNR levels of the study, log-spaced from 0.05 to 6
SNR_GRID = (0.05, 0.09, 0.14, 0.25, 0.42, 0.71, 1.22, 2.07, 3.52, 6.00)


def population_pve(snr: float) -> float:
    """Largest attainable proportion of variance explained, snr / (1 + snr)."""
    return snr / (1.0 + snr)


def noise_variance(beta0: np.ndarray, sigma: AR1Covariance, snr: float) -> float:
    """
    Noise variance meeting the requested SNR: beta0^T Sigma beta0 / snr.
    """
    if snr <= 0:
        raise ValueError(f"snr must be > 0, got {snr}")
    if not np.any(beta0):
        raise ValueError("beta0 is identically zero, so the SNR is undefined")
    return sigma.quad_form(beta0) / snr


@dataclass(frozen=True, eq=False)
class GroundTruth:
    beta0: np.ndarray
    sigma: AR1Covariance
    sigma2: float
    snr: float

    def __post_init__(self):
        if self.sigma2 <= 0 or self.snr <= 0:
            raise ValueError("sigma2 and snr must both be positive")
        signal = self.signal_variance
        if abs(self.sigma2 * self.snr - signal) > 1e-12 * signal:
            raise ValueError(
                f"sigma2 * snr = {self.sigma2 * self.snr!r} does not match beta0' Sigma beta0 = {signal!r}"
            )

    @property
    def p(self) -> int:
        return self.beta0.shape[0]

    @property
    def signal_variance(self) -> float:
        return self.sigma.quad_form(self.beta0)

    @property
    def null_rte(self) -> float:
        return self.snr + 1.0

    @property
    def perfect_pve(self) -> float:
        return population_pve(self.snr)

    @classmethod
    def build(cls, p: int, s: int, beta_type, rho: float, snr: float) -> "GroundTruth":
        beta0 = make_coefficients(p, s, beta_type)
        sigma = make_covariance(p, rho)
        return cls(beta0=beta0, sigma=sigma, sigma2=noise_variance(beta0, sigma, snr), snr=float(snr))


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        if self.X.ndim != 2 or self.Y.ndim != 1:
            raise ValueError(f"expected X 2-D and Y 1-D, got {self.X.shape} and {self.Y.shape}")
        n, p = self.X.shape
        if n < 1 or p < 1:
            raise ValueError(f"dataset must have n >= 1 and p >= 1, got n={n}, p={p}")
        if self.Y.shape[0] != n:
            raise ValueError(f"X has {n} rows but Y has {self.Y.shape[0]} entries")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.Y))):
            raise ValueError("dataset contains non-finite entries")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def sample_design(n: int, sigma: AR1Covariance, rng: np.random.Generator) -> np.ndarray:
    """Rows i.i.d. N(0, Sigma) as Z L^T with Z standard normal."""
    Z = rng.standard_normal((n, sigma.p))
    return Z @ sigma.cholesky.T


def sample_response(X: np.ndarray, truth: GroundTruth, rng: np.random.Generator) -> np.ndarray:
    """Y = X beta0 + eps with eps i.i.d. N(0, sigma2)."""
    return X @ truth.beta0 + np.sqrt(truth.sigma2) * rng.standard_normal(X.shape[0])


def sample_dataset(n: int, truth: GroundTruth, stream: np.random.Generator) -> Dataset:
    """
    Draw one dataset from the simulation model.

    The design is drawn before the noise, so a stream always yields the same
    (X, Y) pair.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    X = sample_design(n, truth.sigma, stream)
    Y = sample_response(X, truth, stream)
    return Dataset(X=X, Y=Y)


def repetition_streams(seed: int, scenario_index: int, rep: int,
                       count: int = 3) -> Tuple[np.random.Generator, ...]:
    """
    Independent generators for one repetition of one scenario.

    Streams are keyed by (scenario_index, rep) under the scenario seed, so
    any repetition can be regenerated alone and in any order. The default
    three children feed training data, validation data and solver randomness.
    """
    root = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(scenario_index), int(rep)))
    return tuple(np.random.Generator(np.random.PCG64(child)) for child in root.spawn(count))


def make_stream(seed: Optional[int], *key: int) -> np.random.Generator:
    """A single PCG64 generator keyed by seed and an optional spawn key."""
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(seq))
