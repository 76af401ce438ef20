# datagen/__init__.py

"""
Simulation data generation.

- make_coefficients: true coefficient patterns (beta-types 1, 2, 3, 5)
- make_covariance: AR(1) covariance descriptor
- GroundTruth / noise_variance: SNR-calibrated noise level
- sample_dataset: Gaussian designs and responses from a seeded stream
- scenario files and bundled presets
"""

from .coefficients import BetaType, make_coefficients
from .covariance import AR1Covariance, make_covariance
from .sampling import (
    SNR_GRID,
    Dataset,
    GroundTruth,
    make_stream,
    noise_variance,
    population_pve,
    repetition_streams,
    sample_dataset,
)
from .scenario import SETTINGS, ScenarioFile, ScenarioSpec, load_scenario_file, parse_scenario
from .io import read_dataset_csv, write_dataset_csv

__all__ = [
    "BetaType",
    "make_coefficients",
    "AR1Covariance",
    "make_covariance",
    "SNR_GRID",
    "Dataset",
    "GroundTruth",
    "make_stream",
    "noise_variance",
    "population_pve",
    "repetition_streams",
    "sample_dataset",
    "SETTINGS",
    "ScenarioFile",
    "ScenarioSpec",
    "load_scenario_file",
    "parse_scenario",
    "read_dataset_csv",
    "write_dataset_csv",
]
