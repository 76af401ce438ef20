"""
Solver settings for one scenario.
"""

from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import DEFAULT_BUDGET_SECONDS


class HarnessSettings(BaseModel):
    """
    Tuning grids and solver limits.

    Use for_problem() to get the defaults of a problem size; explicit values
    (scenario file "harness" block, CLI flags, API overrides) win.
    """

    model_config = ConfigDict(extra="forbid")

    n: int = Field(gt=0)
    p: int = Field(gt=0)
    nlambda: int = Field(ge=2)
    lambda_eps: float = Field(gt=0.0, lt=1.0)
    ngamma: int = Field(default=10, ge=2)
    kmax: int = Field(ge=1)
    budget_seconds: float = DEFAULT_BUDGET_SECONDS
    max_nodes: Optional[int] = Field(default=None, gt=0)
    restarts: int = Field(default=50, ge=1)
    iht_max_iter: int = Field(default=1000, ge=1)
    iht_tol: float = Field(default=1e-7, gt=0.0)

    @model_validator(mode="after")
    def _check_kmax(self):
        limit = min(self.n, self.p)
        if self.kmax > limit:
            raise ValueError(f"kmax={self.kmax} exceeds min(n, p) = {limit}")
        return self

    @classmethod
    def for_problem(cls, n: int, p: int, setting: Optional[str] = None,
                    overrides: Optional[Dict[str, Any]] = None) -> "HarnessSettings":
        low = setting == "low"
        values: Dict[str, Any] = {
            "n": n,
            "p": p,
            "nlambda": 50 if low else 100,
            "lambda_eps": 1e-4 if n > p else 1e-2,
            "kmax": 10 if low else min(n, p, 50),
        }
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls(**values)
