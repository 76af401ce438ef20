"""
Declarative scenario files.

A scenario file names a problem setting (or explicit n, p, s), a beta-type,
one or more correlation levels, one or more SNR levels, the repetition count
and the seed. It expands into concrete ScenarioSpec entries in (rho, snr)
order; the position in that order keys the random streams.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import DEFAULT_REPS, METHOD_TOKENS, get_logger
from errors import ScenarioError
from .sampling import GroundTruth

logger = get_logger(__name__)

PRESETS_DIR = Path(__file__).parent / "presets"

# (n, p, s) for the named problem settings
SETTINGS = {
    "low": (100, 10, 5),
    "medium": (500, 100, 5),
    "high-5": (50, 1000, 5),
    "high-10": (100, 1000, 10),
}

SettingName = Literal["low", "medium", "high-5", "high-10"]


class ScenarioSpec(BaseModel):
    """One concrete simulation scenario: a single (rho, snr) cell."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    setting: str = "custom"
    n: int = Field(gt=0)
    p: int = Field(gt=0)
    s: int = Field(gt=0)
    beta_type: Literal[1, 2, 3, 5]
    rho: float = Field(ge=0.0, lt=1.0)
    snr: float = Field(gt=0.0)
    reps: int = Field(default=DEFAULT_REPS, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    index: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_sparsity(self):
        if self.s > self.p:
            raise ValueError(f"s={self.s} exceeds p={self.p}")
        if self.s < 2 and self.beta_type in (1, 3):
            raise ValueError(f"beta_type {self.beta_type} needs s >= 2")
        return self

    def truth(self) -> GroundTruth:
        return GroundTruth.build(self.p, self.s, self.beta_type, self.rho, self.snr)

    def metadata(self) -> Dict[str, Any]:
        """Identifying columns shared by every emitted row."""
        return {
            "setting": self.setting,
            "n": self.n,
            "p": self.p,
            "s": self.s,
            "beta_type": self.beta_type,
            "rho": self.rho,
            "snr": self.snr,
        }


class ScenarioFile(BaseModel):
    """Contents of a scenario JSON file before expansion."""

    model_config = ConfigDict(extra="forbid")

    setting: Optional[SettingName] = None
    n: Optional[int] = Field(default=None, gt=0)
    p: Optional[int] = Field(default=None, gt=0)
    s: Optional[int] = Field(default=None, gt=0)
    beta_type: Literal[1, 2, 3, 5] = 2
    rho: Union[float, List[float]] = 0.35
    snr: Union[float, List[float]]
    reps: int = Field(default=DEFAULT_REPS, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    methods: Optional[List[str]] = None
    harness: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("rho", "snr")
    @classmethod
    def _check_levels(cls, value, info):
        values = value if isinstance(value, list) else [value]
        if not values:
            raise ValueError("must be a number or a non-empty list")
        if info.field_name == "rho" and any(not 0.0 <= v < 1.0 for v in values):
            raise ValueError(f"rho must lie in [0, 1), got {value}")
        if info.field_name == "snr" and any(v <= 0 for v in values):
            raise ValueError(f"snr must be > 0, got {value}")
        return value

    @field_validator("methods")
    @classmethod
    def _known_methods(cls, value):
        if value is not None:
            unknown = [m for m in value if m not in METHOD_TOKENS]
            if unknown or not value:
                raise ValueError(f"methods must be a non-empty subset of {list(METHOD_TOKENS)}, got {value}")
        return value

    @model_validator(mode="after")
    def _resolve_dimensions(self):
        explicit = (self.n, self.p, self.s)
        if self.setting is not None:
            if any(v is not None for v in explicit):
                raise ValueError("give either 'setting' or explicit n, p, s, not both")
            self.n, self.p, self.s = SETTINGS[self.setting]
        elif any(v is None for v in explicit):
            raise ValueError("explicit scenarios need all of n, p and s")
        if self.s > self.p:
            raise ValueError(f"s={self.s} exceeds p={self.p}")
        if self.s < 2 and self.beta_type in (1, 3):
            raise ValueError(f"beta_type {self.beta_type} needs s >= 2")
        return self

    @property
    def rhos(self) -> List[float]:
        return list(self.rho) if isinstance(self.rho, list) else [self.rho]

    @property
    def snrs(self) -> List[float]:
        return list(self.snr) if isinstance(self.snr, list) else [self.snr]

    def expand(self, reps: Optional[int] = None, seed: Optional[int] = None) -> List[ScenarioSpec]:
        """Concrete scenarios in (rho, snr) order, optionally overriding reps and seed."""
        specs = []
        for rho in self.rhos:
            for snr in self.snrs:
                specs.append(ScenarioSpec(
                    setting=self.setting or "custom",
                    n=self.n, p=self.p, s=self.s,
                    beta_type=self.beta_type,
                    rho=rho, snr=snr,
                    reps=self.reps if reps is None else reps,
                    seed=self.seed if seed is None else seed,
                    index=len(specs),
                ))
        return specs


def resolve_scenario_path(name: Union[str, Path]) -> Path:
    """A path to an existing file, or the name of a bundled preset."""
    path = Path(name)
    if path.is_file():
        return path
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    preset = PRESETS_DIR / f"{stem}.json"
    if preset.is_file():
        return preset
    raise ScenarioError(f"scenario file not found: {name}")


def _line_of_key(text: str, key: str) -> Optional[int]:
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def parse_scenario(text: str, source: str = "<scenario>") -> ScenarioFile:
    """
    Parse and validate scenario JSON.

    Raises:
        ScenarioError: with line/column for syntax errors, field and line for
            validation errors
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{source}:{e.lineno}:{e.colno}: {e.msg}", line=e.lineno, column=e.colno) from e

    if not isinstance(raw, dict):
        raise ScenarioError(f"{source}: top level must be a JSON object", line=1)

    try:
        return ScenarioFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        line = _line_of_key(text, str(first["loc"][0])) if first["loc"] else None
        where = f"{source}:{line}" if line else source
        what = f"field '{field}': " if field else ""
        raise ScenarioError(f"{where}: {what}{first['msg']}", line=line, field=field) from e


def load_scenario_file(path: Union[str, Path]) -> ScenarioFile:
    path = resolve_scenario_path(path)
    logger.debug(f"📄 Loading scenario file {path}")
    try:
        text = path.read_text()
    except OSError as e:
        raise ScenarioError(f"cannot read scenario file {path}: {e}") from e
    return parse_scenario(text, source=str(path))
