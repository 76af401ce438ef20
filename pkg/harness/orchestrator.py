# harness/orchestrator.py

"""
Simulation pipeline for one scenario.

Every repetition runs through a LangGraph workflow

    generate -> fit -> tune -> score

that draws training and validation data, fits each method's full path,
applies validation tuning and scores the tuned fits. Oracle tuning needs the
paths of all repetitions, so it runs after every repetition has finished.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, TypedDict

import numpy as np
import pandas as pd
from langchain_core.runnables import RunnableLambda
from langgraph.graph import END, StateGraph

from config import get_logger, get_thread_cap
from datagen import Dataset, GroundTruth, ScenarioSpec, repetition_streams, sample_dataset
from errors import TuningError
from metrics import MetricRecord, path_relative_risks, score
from .aggregate import LONG_COLUMNS, aggregate, summarize
from .methods import MethodFit, create_method, parse_methods
from .reports import risk_curve_frame
from .settings import HarnessSettings
from .tuning import TUNING_RULES, tune_oracle, tune_validation

logger = get_logger(__name__)


class RepetitionState(TypedDict):
    """State that flows through one repetition."""
    spec: ScenarioSpec
    settings: HarnessSettings
    truth: GroundTruth
    rep: int
    methods: List[str]
    tuning: List[str]
    train: Optional[Dataset]
    validation: Optional[Dataset]
    solver_stream: Any
    fits: Dict[str, MethodFit]
    chosen: Dict[str, int]
    records: List[MetricRecord]
    status: str


class GenerateNode:
    """Draws the training and validation datasets of one repetition."""

    def run(self, state: RepetitionState) -> Dict[str, Any]:
        spec = state["spec"]
        train_stream, validation_stream, solver_stream = repetition_streams(spec.seed, spec.index, state["rep"])
        return {
            "train": sample_dataset(spec.n, state["truth"], train_stream),
            "validation": sample_dataset(spec.n, state["truth"], validation_stream),
            "solver_stream": solver_stream,
            "status": "generated",
        }


class FitNode:
    """Fits each requested method's full path on the training data."""

    def run(self, state: RepetitionState) -> Dict[str, Any]:
        train = state["train"]
        fits = {}
        for token in state["methods"]:
            method = create_method(token, state["settings"])
            fits[token] = method.fit(train.X, train.Y, stream=state["solver_stream"])
        failed = [t for t, f in fits.items() if not f.ok]
        if failed:
            logger.warning(f"⚠️ rep {state['rep']}: {', '.join(failed)} failed")
        return {"fits": fits, "status": "fitted"}


class TuneNode:
    """Validation tuning: one path index per fitted method."""

    def run(self, state: RepetitionState) -> Dict[str, Any]:
        if "val" not in state["tuning"]:
            return {"status": "tuned"}
        chosen = {}
        for token, fit in state["fits"].items():
            if fit.ok:
                chosen[token] = tune_validation(fit.path, state["validation"])
        return {"chosen": chosen, "status": "tuned"}


class ScoreNode:
    """Scores validation-tuned fits against the ground truth."""

    def run(self, state: RepetitionState) -> Dict[str, Any]:
        records = []
        for token, index in state["chosen"].items():
            path = state["fits"][token].path
            records.append(score(path.betas[index], state["truth"], token, "val", state["rep"],
                                 index=index, labels=path.label(index)))
        return {"records": records, "status": "scored"}


def create_generate_node() -> RunnableLambda:
    return RunnableLambda(GenerateNode().run)


def create_fit_node() -> RunnableLambda:
    return RunnableLambda(FitNode().run)


def create_tune_node() -> RunnableLambda:
    return RunnableLambda(TuneNode().run)


def create_score_node() -> RunnableLambda:
    return RunnableLambda(ScoreNode().run)


def build_repetition_graph():
    """Compile the generate -> fit -> tune -> score workflow."""
    workflow = StateGraph(RepetitionState)
    workflow.add_node("generate", create_generate_node())
    workflow.add_node("fit", create_fit_node())
    workflow.add_node("tune", create_tune_node())
    workflow.add_node("score", create_score_node())

    workflow.set_entry_point("generate")
    workflow.add_edge("generate", "fit")
    workflow.add_edge("fit", "tune")
    workflow.add_edge("tune", "score")
    workflow.add_edge("score", END)
    return workflow.compile()


@dataclass(eq=False)
class Failure:
    method: str
    rep: int
    error: str


@dataclass(eq=False)
class RunResult:
    """Everything one scenario produced."""
    spec: ScenarioSpec
    settings: HarnessSettings
    methods: List[str]
    tuning: List[str]
    records: List[MetricRecord] = field(default_factory=list)
    timings: List[Dict[str, Any]] = field(default_factory=list)
    failures: List[Failure] = field(default_factory=list)
    oracle_index: Dict[str, int] = field(default_factory=dict)
    risk_curves: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.failures)

    def long_frame(self) -> pd.DataFrame:
        meta = self.spec.metadata()
        rows = []
        for record in self.records:
            for metric, value in record.rows():
                rows.append({**meta, "method": record.method, "tuning_rule": record.tuning_rule,
                             "rep": record.rep, "metric": metric, "value": value})
        return pd.DataFrame(rows, columns=LONG_COLUMNS)

    def summary_frame(self) -> pd.DataFrame:
        return aggregate(self.long_frame())

    def risk_curve_frame(self) -> pd.DataFrame:
        return risk_curve_frame(self.risk_curves)

    def summary_line(self) -> str:
        summary = self.summary_frame()
        rte = summary[summary["metric"] == "rte"]
        parts = [f"{r.method}/{r.tuning_rule} rte={r.mean:.3f}" for r in rte.itertuples()]
        status = f" ({len(self.failures)} failed fits)" if self.failures else ""
        return (f"{self.spec.setting} rho={self.spec.rho:g} snr={self.spec.snr:g}: "
                + ", ".join(parts) + status)


def path_risk_curves(spec: ScenarioSpec, truth: GroundTruth, token: str,
                     paths: Sequence) -> List[Dict[str, Any]]:
    """
    Mean and SE over repetitions of the relative risk at every path position,
    with the mean number of nonzeros there.
    """
    if not paths:
        return []
    if len({len(path) for path in paths}) != 1:
        logger.warning(f"⚠️ {token}: path lengths differ across repetitions, no risk curve")
        return []
    rr = np.array([path_relative_risks(path.betas, truth) for path in paths])
    nonzeros = np.array([path.nnz for path in paths], dtype=float)
    meta = spec.metadata()
    rows = []
    for index in range(rr.shape[1]):
        stats = summarize(rr[:, index])
        rows.append({**meta, "method": token, "index": index, "rr_mean": stats["mean"], "rr_se": stats["se"],
                     "nnz_mean": summarize(nonzeros[:, index])["mean"], "reps": stats["reps"]})
    return rows


def _normalize_tuning(tuning) -> List[str]:
    if tuning in (None, "both"):
        return list(TUNING_RULES)
    rules = [tuning] if isinstance(tuning, str) else list(tuning)
    for rule in rules:
        if rule not in TUNING_RULES:
            raise ValueError(f"unknown tuning rule '{rule}', expected val, oracle or both")
    return [r for r in TUNING_RULES if r in rules]


def run_scenario(spec: ScenarioSpec, methods: Optional[Sequence[str]] = None, tuning="both",
                 settings: Optional[HarnessSettings] = None,
                 max_workers: Optional[int] = None) -> RunResult:
    """
    Run every repetition of one scenario and score the tuned fits.

    Repetitions are independent and may run on several threads; results are
    stored by repetition index, so output does not depend on completion order.
    Solver failures are recorded per (method, rep) and the scenario still
    completes.
    """
    methods = parse_methods(methods)
    rules = _normalize_tuning(tuning)
    settings = settings or HarnessSettings.for_problem(spec.n, spec.p, spec.setting)
    truth = spec.truth()
    graph = build_repetition_graph()

    logger.info(f"🚀 Scenario {spec.index}: {spec.setting} n={spec.n} p={spec.p} rho={spec.rho:g} "
                f"snr={spec.snr:g}, {spec.reps} reps, methods {','.join(methods)}")

    def run_rep(rep: int) -> Dict[str, Any]:
        return graph.invoke({
            "spec": spec,
            "settings": settings,
            "truth": truth,
            "rep": rep,
            "methods": methods,
            "tuning": rules,
            "train": None,
            "validation": None,
            "solver_stream": None,
            "fits": {},
            "chosen": {},
            "records": [],
            "status": "started",
        })

    workers = max_workers or get_thread_cap()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            states = list(pool.map(run_rep, range(spec.reps)))
    else:
        states = [run_rep(rep) for rep in range(spec.reps)]

    result = RunResult(spec=spec, settings=settings, methods=methods, tuning=rules)
    for rep, state in enumerate(states):
        for token in methods:
            fit = state["fits"][token]
            result.timings.append({
                "setting": spec.setting, "n": spec.n, "p": spec.p, "method": token,
                "seconds": fit.wall_time, "certified": fit.certified,
            })
            if not fit.ok:
                result.failures.append(Failure(token, rep, fit.error))

    for token in methods:
        paths = [state["fits"][token].path for state in states if state["fits"][token].ok]
        result.risk_curves.extend(path_risk_curves(spec, truth, token, paths))

    val_records = [r for state in states for r in state["records"]]

    oracle_records = []
    if "oracle" in rules:
        for token in methods:
            fitted = [(rep, state["fits"][token].path) for rep, state in enumerate(states)
                      if state["fits"][token].ok]
            if not fitted:
                continue
            try:
                index = tune_oracle([path for _, path in fitted], truth)
            except TuningError as e:
                logger.error(f"❌ oracle tuning failed for {token}: {e}")
                result.failures.extend(Failure(token, rep, str(e)) for rep, _ in fitted)
                continue
            result.oracle_index[token] = index
            for rep, path in fitted:
                oracle_records.append(score(path.betas[index], truth, token, "oracle", rep,
                                            index=index, labels=path.label(index)))

    order = {token: i for i, token in enumerate(methods)}
    rule_order = {rule: i for i, rule in enumerate(TUNING_RULES)}
    result.records = sorted(val_records + oracle_records,
                            key=lambda r: (order[r.method], rule_order[r.tuning_rule], r.rep))

    logger.info(f"✅ Scenario {spec.index} done: {len(result.records)} tuned fits, "
                f"{len(result.failures)} failures")
    return result
