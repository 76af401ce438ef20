import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from datagen import Dataset, GroundTruth, ScenarioSpec
from errors import OutputExistsError, SchemaError, TuningError
from harness import (
    LONG_COLUMNS,
    RISK_CURVE_COLUMNS,
    SUMMARY_COLUMNS,
    HarnessSettings,
    aggregate,
    build_repetition_graph,
    check_outputs,
    create_method,
    figure_tables,
    parse_methods,
    path_risk_curves,
    read_long_csv,
    run_scenario,
    summarize,
    timing_frame,
    tune_oracle,
    tune_validation,
    write_csv,
)
from harness.methods import SubsetMethod
from solvers import CoefficientPath


@pytest.fixture
def tiny_spec():
    return ScenarioSpec(setting="custom", n=30, p=8, s=3, beta_type=2, rho=0.35, snr=1.0, reps=3, seed=5)


@pytest.fixture
def tiny_settings():
    return HarnessSettings.for_problem(30, 8, overrides={"nlambda": 10, "budget_seconds": 10.0,
                                                         "restarts": 3, "max_nodes": 5000})


class TestSettings:
    def test_low_setting_defaults(self):
        settings = HarnessSettings.for_problem(100, 10, "low")
        assert settings.nlambda == 50
        assert settings.kmax == 10
        assert settings.lambda_eps == 1e-4

    def test_high_dimensional_defaults(self):
        settings = HarnessSettings.for_problem(50, 1000, "high-5")
        assert settings.nlambda == 100
        assert settings.kmax == 50
        assert settings.lambda_eps == 1e-2

    def test_overrides_win_and_none_is_ignored(self):
        settings = HarnessSettings.for_problem(100, 10, overrides={"kmax": 4, "max_nodes": None})
        assert settings.kmax == 4
        assert settings.max_nodes is None

    def test_kmax_limited_by_dimensions(self):
        with pytest.raises(ValidationError):
            HarnessSettings.for_problem(100, 10, overrides={"kmax": 11})

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            HarnessSettings.for_problem(100, 10, overrides={"lambdas": 3})


class TestMethods:
    def test_parse_methods(self):
        assert parse_methods(None) == ["lasso", "relaxo", "fs", "bs"]
        assert parse_methods("bs, lasso") == ["lasso", "bs"]
        assert parse_methods(["fs"]) == ["fs"]
        with pytest.raises(ValueError):
            parse_methods("lasso,ridge")
        with pytest.raises(ValueError):
            parse_methods("")

    def test_unknown_method(self, tiny_settings):
        with pytest.raises(ValueError):
            create_method("ridge", tiny_settings)

    @pytest.mark.parametrize("token", ["lasso", "relaxo", "fs", "bs"])
    def test_paths_start_at_zero(self, token, small_problem):
        X, Y = small_problem
        settings = HarnessSettings.for_problem(50, 12, overrides={"nlambda": 10, "kmax": 5,
                                                                  "restarts": 2, "budget_seconds": 5.0})
        fit = create_method(token, settings).fit(X, Y, stream=np.random.default_rng(0))
        assert fit.ok
        assert not fit.path.betas[0].any()
        assert fit.wall_time >= 0

    def test_failure_is_recorded(self, tiny_settings, small_problem, monkeypatch):
        def boom(self, X, Y, stream=None, grid=None):
            raise ValueError("solver exploded")

        monkeypatch.setattr(SubsetMethod, "solve", boom)
        fit = create_method("bs", tiny_settings).fit(*small_problem)
        assert not fit.ok
        assert "solver exploded" in fit.error


class TestValidationTuning:
    def test_smallest_error_wins(self, rng):
        X = rng.standard_normal((20, 3))
        beta = np.array([1.0, 0.0, -1.0])
        val = Dataset(X=X, Y=X @ beta)
        path = CoefficientPath("fs", np.array([np.zeros(3), [1.0, 0, 0], beta, beta + 0.1]))
        assert tune_validation(path, val) == 2

    def test_tie_goes_to_sparser_then_lower_index(self, rng):
        X = rng.standard_normal((20, 2))
        val = Dataset(X=X, Y=np.zeros(20))
        path = CoefficientPath("fs", np.zeros((3, 2)))
        assert tune_validation(path, val) == 0
        # Same fit, different sparsity: duplicate column.
        Xd = np.column_stack([X[:, 0], X[:, 0]])
        val = Dataset(X=Xd, Y=Xd[:, 0])
        path = CoefficientPath("fs", np.array([[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]]))
        assert tune_validation(path, val) == 1

    def test_single_entry(self, rng):
        val = Dataset(X=rng.standard_normal((5, 2)), Y=rng.standard_normal(5))
        assert tune_validation(CoefficientPath("bs", np.zeros((1, 2))), val) == 0

    def test_width_mismatch(self, rng):
        val = Dataset(X=rng.standard_normal((5, 2)), Y=rng.standard_normal(5))
        with pytest.raises(TuningError):
            tune_validation(CoefficientPath("bs", np.zeros((2, 3))), val)


class TestOracleTuning:
    @pytest.fixture
    def truth(self):
        return GroundTruth.build(6, 2, 2, 0.35, 1.0)

    def test_order_invariant(self, truth, rng):
        paths = [CoefficientPath("lasso", rng.standard_normal((5, 6))) for _ in range(7)]
        paths.append(CoefficientPath("lasso", np.tile(truth.beta0, (5, 1))))
        forward = tune_oracle(paths, truth)
        assert tune_oracle(paths[::-1], truth) == forward
        assert tune_oracle(paths[3:] + paths[:3], truth) == forward

    def test_single_repetition(self, truth):
        betas = np.vstack([np.zeros(6), truth.beta0, 2 * truth.beta0])
        assert tune_oracle([CoefficientPath("fs", betas)], truth) == 1

    def test_ties_go_to_lower_index(self, truth):
        betas = np.vstack([np.zeros(6), truth.beta0, truth.beta0])
        assert tune_oracle([CoefficientPath("fs", betas)], truth) == 1

    def test_grid_mismatch(self, truth):
        with pytest.raises(TuningError):
            tune_oracle([CoefficientPath("fs", np.zeros((3, 6))), CoefficientPath("fs", np.zeros((4, 6)))], truth)
        with pytest.raises(TuningError):
            tune_oracle([], truth)


class TestAggregate:
    def test_summarize(self):
        stats = summarize(np.array([1.0, 2.0, 3.0, 4.0]))
        assert stats["mean"] == 2.5
        assert stats["se"] == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
        assert stats["reps"] == 4

    def test_constant_values_have_zero_se(self):
        stats = summarize(np.full(10, 0.1))
        assert stats["se"] == 0.0
        assert stats["mean"] == 0.1

    def test_single_value(self):
        stats = summarize(np.array([3.0]))
        assert stats["mean"] == 3.0
        assert np.isnan(stats["se"])

    def test_permutation_invariant(self, rng):
        values = rng.standard_normal(50) * 1e6
        a, b = summarize(values), summarize(rng.permutation(values))
        assert a["mean"] == b["mean"]
        assert a["se"] == b["se"]

    def test_reference_columns(self):
        rows = [{"setting": "low", "n": 100, "p": 10, "s": 5, "beta_type": 2, "rho": 0.0, "snr": 6.0,
                 "method": "lasso", "tuning_rule": "val", "rep": r, "metric": "pve", "value": v}
                for r, v in enumerate([0.5, 0.7])]
        summary = aggregate(pd.DataFrame(rows, columns=LONG_COLUMNS))
        assert list(summary.columns) == SUMMARY_COLUMNS
        row = summary.iloc[0]
        assert row["mean"] == pytest.approx(0.6)
        assert row["null_rte"] == 7.0
        assert row["perfect_pve"] == pytest.approx(6 / 7)
        assert row["true_s"] == 5

    def test_empty(self):
        assert list(aggregate(pd.DataFrame(columns=LONG_COLUMNS)).columns) == SUMMARY_COLUMNS


class TestRunScenario:
    def test_graph_compiles(self):
        assert build_repetition_graph() is not None

    def test_records_and_identities(self, tiny_spec, tiny_settings):
        result = run_scenario(tiny_spec, tuning="both", settings=tiny_settings, max_workers=1)
        assert not result.partial
        assert len(result.records) == 4 * 2 * 3
        assert set(result.oracle_index) == {"lasso", "relaxo", "fs", "bs"}
        for record in result.records:
            assert record.rte == pytest.approx(record.rr * tiny_spec.snr + 1, abs=1e-10)
            assert record.pve == pytest.approx(1 - record.rte / (tiny_spec.snr + 1), abs=1e-10)
            assert 0 <= record.nnz <= tiny_spec.p
        for record in result.records:
            if record.tuning_rule == "oracle":
                assert record.index == result.oracle_index[record.method]
        long = result.long_frame()
        assert list(long.columns) == LONG_COLUMNS
        assert len(long) == len(result.records) * 4

    def test_deterministic_and_thread_independent(self, tiny_spec, tiny_settings):
        a = run_scenario(tiny_spec, methods="lasso,fs,bs", settings=tiny_settings, max_workers=1)
        b = run_scenario(tiny_spec, methods="lasso,fs,bs", settings=tiny_settings, max_workers=3)
        pd.testing.assert_frame_equal(a.long_frame(), b.long_frame())

    def test_validation_only(self, tiny_spec, tiny_settings):
        result = run_scenario(tiny_spec, methods=["fs"], tuning="val", settings=tiny_settings, max_workers=1)
        assert {r.tuning_rule for r in result.records} == {"val"}
        assert [r.rep for r in result.records] == [0, 1, 2]
        assert result.oracle_index == {}

    def test_bad_tuning_rule(self, tiny_spec, tiny_settings):
        with pytest.raises(ValueError):
            run_scenario(tiny_spec, tuning="cv", settings=tiny_settings)

    def test_partial_failure(self, tiny_spec, tiny_settings, monkeypatch):
        def boom(self, X, Y, stream=None, grid=None):
            raise ValueError("solver exploded")

        monkeypatch.setattr(SubsetMethod, "solve", boom)
        result = run_scenario(tiny_spec, methods="lasso,bs", settings=tiny_settings, max_workers=1)
        assert result.partial
        assert [(f.method, f.rep) for f in result.failures] == [("bs", 0), ("bs", 1), ("bs", 2)]
        assert {r.method for r in result.records} == {"lasso"}
        assert "failed fits" in result.summary_line()

    def test_timing_entries(self, tiny_spec, tiny_settings):
        result = run_scenario(tiny_spec, methods="fs,bs", tuning="val", settings=tiny_settings, max_workers=1)
        timing = timing_frame(result.timings)
        assert list(timing["method"]) == ["bs", "fs"]
        assert list(timing["paths"]) == [3, 3]
        assert timing.loc[timing["method"] == "bs", "certified_mean"].iloc[0] == tiny_settings.kmax + 1
        assert np.isnan(timing.loc[timing["method"] == "fs", "certified_mean"].iloc[0])


    def test_risk_curves_follow_the_paths(self, tiny_spec, tiny_settings):
        result = run_scenario(tiny_spec, methods="fs,bs", tuning="oracle", settings=tiny_settings, max_workers=1)
        curve = result.risk_curve_frame()
        assert list(curve.columns) == RISK_CURVE_COLUMNS
        for token in ("fs", "bs"):
            rows = curve[curve["method"] == token]
            assert list(rows["index"]) == list(range(tiny_settings.kmax + 1))
            assert rows["rr_mean"].iloc[0] == pytest.approx(1.0, rel=1e-12)
            assert rows["nnz_mean"].iloc[0] == 0
            assert (rows["nnz_mean"].to_numpy() <= np.arange(tiny_settings.kmax + 1)).all()
            assert (rows["reps"] == 3).all()
            oracle = result.oracle_index[token]
            assert rows["rr_mean"].iloc[oracle] == pytest.approx(rows["rr_mean"].min(), rel=1e-12)
            tuned = [r.rr for r in result.records if r.method == token]
            assert rows["rr_mean"].iloc[oracle] == pytest.approx(np.mean(tuned), rel=1e-10)

    def test_risk_curves_need_aligned_paths(self, tiny_spec):
        truth = tiny_spec.truth()
        paths = [CoefficientPath("fs", np.zeros((3, 8))), CoefficientPath("fs", np.zeros((4, 8)))]
        assert path_risk_curves(tiny_spec, truth, "fs", paths) == []
        assert path_risk_curves(tiny_spec, truth, "fs", []) == []

class TestReports:
    @pytest.fixture
    def long_frame(self, tiny_spec, tiny_settings):
        return run_scenario(tiny_spec, methods="lasso,fs", settings=tiny_settings, max_workers=1).long_frame()

    def test_csv_round_trip(self, long_frame, tmp_path):
        path = write_csv(long_frame, tmp_path / "long.csv")
        back = read_long_csv([path])
        np.testing.assert_array_equal(back["value"].to_numpy(), long_frame["value"].to_numpy())
        pd.testing.assert_frame_equal(aggregate(back), aggregate(long_frame), check_dtype=False)

    def test_missing_column(self, long_frame, tmp_path):
        path = write_csv(long_frame.drop(columns=["snr"]), tmp_path / "long.csv")
        with pytest.raises(SchemaError) as info:
            read_long_csv([path])
        assert info.value.column == "snr"

    def test_non_numeric_value(self, long_frame, tmp_path):
        broken = long_frame.astype({"value": object})
        broken.loc[0, "value"] = "oops"
        path = write_csv(broken, tmp_path / "long.csv")
        with pytest.raises(SchemaError) as info:
            read_long_csv([path])
        assert info.value.column == "value"

    def test_unexpected_column(self, long_frame, tmp_path):
        path = write_csv(long_frame.assign(extra=1), tmp_path / "long.csv")
        with pytest.raises(SchemaError) as info:
            read_long_csv([path])
        assert info.value.column == "extra"

    def test_figure_tables(self, long_frame):
        tables = figure_tables(aggregate(long_frame))
        assert set(tables) == {"custom_rr", "custom_rte", "custom_pve", "custom_nnz"}
        table = tables["custom_rte"]
        assert {"lasso_mean", "lasso_se", "fs_mean", "fs_se", "null_rte", "perfect_pve", "true_s"} <= set(table)
        assert len(table) == 2

    def test_refuses_to_overwrite(self, tmp_path):
        (tmp_path / "long.csv").write_text("x\n")
        with pytest.raises(OutputExistsError):
            check_outputs(tmp_path, ["long.csv"])
        assert check_outputs(tmp_path, ["long.csv"], force=True) == tmp_path
