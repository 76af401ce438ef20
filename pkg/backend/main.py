from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, ValidationError

from config import get_logger, get_runtime_config, validate_config
from datagen import Dataset, ScenarioFile
from errors import SparseBenchError
from harness import HarnessSettings, aggregate, create_method, parse_methods, run_scenario, tune_validation

# Set up logging for this module
logger = get_logger(__name__)

app = FastAPI(title="SparseBench API", description="Sparse regression solvers and simulation bench")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

INPUT_ERRORS = (SparseBenchError, ValidationError, ValueError)


class SimulateRequest(BaseModel):
    setting: Optional[str] = None
    n: Optional[int] = None
    p: Optional[int] = None
    s: Optional[int] = None
    beta_type: int = 2
    rho: Union[float, List[float]] = 0.35
    snr: Union[float, List[float]]
    reps: int = 10
    seed: int = 0
    methods: Optional[List[str]] = None
    tuning: Literal["val", "oracle", "both"] = "both"
    settings: Dict[str, Any] = Field(default_factory=dict)


class SummaryRow(BaseModel):
    rho: float
    snr: float
    method: str
    tuning_rule: str
    metric: str
    mean: float
    se: Optional[float]
    reps: int


class SimulateResponse(BaseModel):
    rows: List[SummaryRow]
    failures: int


class FitRequest(BaseModel):
    X: List[List[float]]
    y: List[float]
    method: Literal["lasso", "relaxo", "fs", "bs"]
    X_val: Optional[List[List[float]]] = None
    y_val: Optional[List[float]] = None
    settings: Dict[str, Any] = Field(default_factory=dict)


class FitResponse(BaseModel):
    method: str
    labels: Dict[str, List[float]]
    betas: List[List[float]]
    wall_time: float
    certified: Optional[int] = None
    tuned_index: Optional[int] = None
    tuned_beta: Optional[List[float]] = None


def _dataset(X, y) -> Dataset:
    return Dataset(X=np.asarray(X, dtype=float), Y=np.asarray(y, dtype=float))


def _finite(value: float) -> Optional[float]:
    return None if value is None or np.isnan(value) else float(value)


@app.on_event("startup")
async def startup_event():
    is_valid, error = validate_config()
    if is_valid:
        logger.info("✅ SparseBench API ready")
    else:
        logger.error(f"❌ Configuration Error: {error}")


@app.get("/")
def read_root():
    return {"message": "SparseBench backend is running.", "status": "ready"}


@app.get("/health")
def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}


@app.get("/config")
def runtime_config():
    """Current runtime configuration."""
    return get_runtime_config()


@app.post("/simulate", response_model=SimulateResponse)
def simulate(request: SimulateRequest):
    """
    Run a desk-scale scenario and return the summary rows.

    Example request:
    {
        "setting": "low",
        "rho": 0.35,
        "snr": [0.25, 6.0],
        "reps": 5,
        "methods": ["lasso", "fs"],
        "tuning": "val"
    }
    """
    try:
        body = request.model_dump(exclude={"methods", "tuning", "settings"}, exclude_none=True)
        scenario = ScenarioFile.model_validate(body)
        methods = parse_methods(request.methods)
        results = []
        for spec in scenario.expand():
            settings = HarnessSettings.for_problem(spec.n, spec.p, spec.setting, request.settings)
            results.append(run_scenario(spec, methods, request.tuning, settings))
    except INPUT_ERRORS as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Simulation failed: {e}")
        raise HTTPException(status_code=500, detail=f"Simulation failed: {str(e)}")

    rows = []
    for result in results:
        for r in result.summary_frame().itertuples():
            rows.append(SummaryRow(rho=r.rho, snr=r.snr, method=r.method, tuning_rule=r.tuning_rule,
                                   metric=r.metric, mean=r.mean, se=_finite(r.se), reps=r.reps))
    return SimulateResponse(rows=rows, failures=sum(len(r.failures) for r in results))


@app.post("/fit", response_model=FitResponse)
def fit(request: FitRequest):
    """Fit one method's full path; with validation data, also return the tuned fit."""
    try:
        train = _dataset(request.X, request.y)
        validation = None
        if request.X_val is not None or request.y_val is not None:
            if request.X_val is None or request.y_val is None:
                raise ValueError("X_val and y_val must be given together")
            validation = _dataset(request.X_val, request.y_val)
        settings = HarnessSettings.for_problem(train.n, train.p, overrides=request.settings)
        result = create_method(request.method, settings).fit(train.X, train.Y, stream=np.random.default_rng(0))
    except INPUT_ERRORS as e:
        raise HTTPException(status_code=422, detail=str(e))

    if not result.ok:
        raise HTTPException(status_code=500, detail=f"Fit failed: {result.error}")

    path = result.path
    response = FitResponse(
        method=request.method,
        labels={name: values.astype(float).tolist() for name, values in path.labels.items()},
        betas=path.betas.tolist(),
        wall_time=result.wall_time,
        certified=result.certified,
    )
    if validation is not None:
        try:
            index = tune_validation(path, validation)
        except INPUT_ERRORS as e:
            raise HTTPException(status_code=422, detail=str(e))
        response.tuned_index = index
        response.tuned_beta = path.betas[index].tolist()
    return response
