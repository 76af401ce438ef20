"""
sparsebench command line.

    sparsebench simulate --scenario desk --methods lasso,fs --out results/desk
    sparsebench fit --train train.csv --validation val.csv --method bs --out fits
    sparsebench df --scenario df --methods lasso,relaxo,fs,bs --out results/df
    sparsebench report results/a/long.csv results/b/long.csv --out results/merged

Exit status: 0 success, 1 some fits failed (results still written), 2 bad
input or usage.
"""

import argparse
import sys
from typing import List, Optional

import numpy as np
import pandas as pd

from config import METHOD_TOKENS, OUTPUT_DIR, get_logger
from datagen import load_scenario_file, make_stream, read_dataset_csv, repetition_streams, sample_dataset
from errors import DatasetFormatError, DegreesOfFreedomError, SparseBenchError
from harness import (
    LONG_FILE,
    RISK_CURVE_FILE,
    SUMMARY_FILE,
    TIMING_FILE,
    HarnessSettings,
    aggregate,
    check_outputs,
    create_method,
    df_fitters,
    figure_tables,
    parse_methods,
    read_long_csv,
    risk_curve_frame,
    run_scenario,
    timing_frame,
    tune_validation,
    write_csv,
)
from metrics import df_montecarlo, null_fitter, ols_fitter
from solvers import export_path, lambda_grid

logger = get_logger(__name__)

DF_FILE = "df.csv"
DEFAULT_DF_METHODS = "lasso,fs,bs"
INPUT_ERRORS = (SparseBenchError, OSError, ValueError)


def _overrides(args, base: Optional[dict] = None) -> dict:
    values = dict(base or {})
    for name in ("budget_seconds", "max_nodes", "kmax", "nlambda"):
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    return values


def cmd_simulate(args) -> int:
    scenario = load_scenario_file(args.scenario)
    methods = parse_methods(args.methods or scenario.methods)
    specs = scenario.expand(reps=args.reps, seed=args.seed)
    out = check_outputs(args.out, [LONG_FILE, SUMMARY_FILE, TIMING_FILE, RISK_CURVE_FILE], force=args.force)
    overrides = _overrides(args, scenario.harness)

    results = []
    for spec in specs:
        settings = HarnessSettings.for_problem(spec.n, spec.p, spec.setting, overrides)
        result = run_scenario(spec, methods, args.tuning, settings)
        print(result.summary_line())
        results.append(result)

    long = pd.concat([r.long_frame() for r in results], ignore_index=True)
    write_csv(long, out / LONG_FILE)
    write_csv(aggregate(long), out / SUMMARY_FILE)
    write_csv(timing_frame([t for r in results for t in r.timings]), out / TIMING_FILE)
    write_csv(risk_curve_frame([row for r in results for row in r.risk_curves]), out / RISK_CURVE_FILE)

    failures = sum(len(r.failures) for r in results)
    if failures:
        logger.warning(f"⚠️ {failures} fits failed; results in {out} are partial")
        return 1
    logger.info(f"✅ Wrote {len(long)} metric rows for {len(specs)} scenario(s) to {out}")
    return 0


def cmd_fit(args) -> int:
    train = read_dataset_csv(args.train)
    validation = read_dataset_csv(args.validation) if args.validation else None
    if validation is not None and validation.p != train.p:
        raise DatasetFormatError(f"validation data has p={validation.p}, training data has p={train.p}")

    token = args.method
    path_file, tuned_file = f"{token}_path.csv", f"{token}_tuned.csv"
    out = check_outputs(args.out, [path_file, tuned_file] if validation is not None else [path_file],
                        force=args.force)
    settings = HarnessSettings.for_problem(train.n, train.p, overrides=_overrides(args))
    fit = create_method(token, settings).fit(train.X, train.Y, stream=make_stream(args.seed))
    if not fit.ok:
        print(f"{token}: fit failed: {fit.error}", file=sys.stderr)
        return 1

    export_path(fit.raw, out / path_file, train.X, train.Y)
    line = f"{token}: {len(fit.path)} path points in {fit.wall_time:.2f}s"
    if fit.certified is not None:
        line += f", {fit.certified}/{len(fit.path)} certified"

    if validation is not None:
        index = tune_validation(fit.path, validation)
        tuned = pd.DataFrame({"index": np.arange(1, train.p + 1), "value": fit.path.betas[index]})
        for name, value in reversed(list(fit.path.label(index).items())):
            tuned.insert(0, name, value)
        tuned.insert(0, "path_index", index)
        write_csv(tuned, out / tuned_file)
        line += f"; validation picks {fit.path.label(index)}"
    print(line)
    return 0


def cmd_df(args) -> int:
    scenario = load_scenario_file(args.scenario)
    specs = scenario.expand(reps=args.reps, seed=args.seed)
    if len(specs) > 1:
        logger.warning(f"⚠️ {args.scenario} expands to {len(specs)} scenarios; using the first")
    spec = specs[0]
    tokens = parse_methods(args.methods or DEFAULT_DF_METHODS)
    settings = HarnessSettings.for_problem(spec.n, spec.p, spec.setting, _overrides(args, scenario.harness))
    out = check_outputs(args.out, [DF_FILE], force=args.force)

    truth = spec.truth()
    design_stream = repetition_streams(spec.seed, spec.index, 0)[0]
    pilot = sample_dataset(spec.n, truth, design_stream)
    X = pilot.X
    grid = lambda_grid(X, pilot.Y, m=settings.nlambda, eps=settings.lambda_eps)
    k_labels = {"k": np.arange(settings.kmax + 1)}

    def noise():
        # Common noise draws for every curve.
        return make_stream(spec.seed, spec.index, 1)

    fitters = [("null", null_fitter, {})]
    if spec.n > spec.p:
        fitters.append(("ols", ols_fitter, {}))
    for token in tokens:
        lasso_family = token in ("lasso", "relaxo")
        for label, fitter in df_fitters(token, settings, grid if lasso_family else None, seed=spec.seed).items():
            fitters.append((label, fitter, {"lambda": grid} if lasso_family else k_labels))

    curves, failed = [], False
    for label, fitter, labels in fitters:
        try:
            curve = df_montecarlo(fitter, X, truth, spec.reps, noise(), method=label, labels=labels)
        except DegreesOfFreedomError as e:
            logger.error(f"❌ {label}: {e}")
            failed = True
            continue
        curves.append(curve)
        print(f"{label}: df {np.array2string(curve.df, precision=2, max_line_width=200)}")

    if curves:
        write_csv(pd.concat([c.to_frame() for c in curves], ignore_index=True), out / DF_FILE)
    return 1 if failed else 0


def cmd_report(args) -> int:
    long = read_long_csv(args.inputs)
    summary = aggregate(long)
    tables = figure_tables(summary)
    names = [SUMMARY_FILE] + [f"tables/{name}.csv" for name in tables]
    out = check_outputs(args.out, names, force=args.force)
    write_csv(summary, out / SUMMARY_FILE)
    for name, table in tables.items():
        write_csv(table, out / "tables" / f"{name}.csv")
    print(f"{len(summary)} summary rows, {len(tables)} tables written to {out}")
    return 0


def _add_budget_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--budget-seconds", type=float, default=None,
                        help="Best subset wall-clock budget per subset size")
    parser.add_argument("--max-nodes", type=int, default=None,
                        help="Best subset node cap per subset size (reproducible budget)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparsebench",
                                     description="Best subset, forward stepwise and lasso simulation bench")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_sim = sub.add_parser("simulate", help="Run scenarios and write long, summary and timing CSVs")
    p_sim.add_argument("--scenario", required=True, help="Scenario JSON file or bundled preset name")
    p_sim.add_argument("--methods", default=None, help=f"Comma-separated subset of {','.join(METHOD_TOKENS)}")
    p_sim.add_argument("--tuning", choices=["val", "oracle", "both"], default="both")
    p_sim.add_argument("--reps", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--out", default=str(OUTPUT_DIR))
    p_sim.add_argument("--force", action="store_true", help="Overwrite existing outputs")
    _add_budget_flags(p_sim)
    p_sim.set_defaults(handler=cmd_simulate)

    p_fit = sub.add_parser("fit", help="Fit one method's path on a dataset CSV")
    p_fit.add_argument("--train", required=True)
    p_fit.add_argument("--validation", default=None)
    p_fit.add_argument("--method", required=True, choices=list(METHOD_TOKENS))
    p_fit.add_argument("--kmax", type=int, default=None)
    p_fit.add_argument("--nlambda", type=int, default=None)
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--out", default=str(OUTPUT_DIR))
    p_fit.add_argument("--force", action="store_true")
    _add_budget_flags(p_fit)
    p_fit.set_defaults(handler=cmd_fit)

    p_df = sub.add_parser("df", help="Monte Carlo degrees of freedom curves")
    p_df.add_argument("--scenario", default="df")
    p_df.add_argument("--methods", default=None, help=f"Default {DEFAULT_DF_METHODS}")
    p_df.add_argument("--reps", type=int, default=None)
    p_df.add_argument("--seed", type=int, default=None)
    p_df.add_argument("--out", default=str(OUTPUT_DIR))
    p_df.add_argument("--force", action="store_true")
    _add_budget_flags(p_df)
    p_df.set_defaults(handler=cmd_df)

    p_rep = sub.add_parser("report", help="Merge long-format CSVs and build plot-ready tables")
    p_rep.add_argument("inputs", nargs="+")
    p_rep.add_argument("--out", default=str(OUTPUT_DIR))
    p_rep.add_argument("--force", action="store_true")
    p_rep.set_defaults(handler=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except INPUT_ERRORS as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
