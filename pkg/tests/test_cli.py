import json

import numpy as np
import pandas as pd
import pytest

from cli.main import build_parser, main
from datagen import GroundTruth, sample_dataset, write_dataset_csv
from harness.methods import SubsetMethod

TINY = {
    "n": 30,
    "p": 6,
    "s": 3,
    "beta_type": 2,
    "rho": [0.0, 0.35],
    "snr": 1.0,
    "reps": 2,
    "seed": 3,
    "harness": {"nlambda": 10, "restarts": 2, "max_nodes": 2000, "budget_seconds": 10},
}


@pytest.fixture
def scenario(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(TINY, indent=2))
    return path


def _simulate(scenario, out, *extra):
    return main(["simulate", "--scenario", str(scenario), "--out", str(out), *extra])


class TestSimulate:
    def test_writes_outputs(self, scenario, tmp_path, capsys):
        out = tmp_path / "run"
        assert _simulate(scenario, out, "--methods", "lasso,fs,bs") == 0
        long = pd.read_csv(out / "long.csv")
        assert len(long) == 2 * 3 * 2 * 2 * 4  # rho levels x methods x rules x reps x metrics
        assert (out / "summary.csv").exists()
        timing = pd.read_csv(out / "timing.csv")
        assert set(timing["method"]) == {"lasso", "fs", "bs"}
        assert "rte=" in capsys.readouterr().out

    def test_writes_risk_curves(self, scenario, tmp_path):
        out = tmp_path / "run"
        assert _simulate(scenario, out, "--methods", "lasso,fs", "--tuning", "oracle") == 0
        curve = pd.read_csv(out / "risk_curve.csv")
        counts = curve.groupby(["rho", "method"]).size()
        assert counts.loc[(0.0, "fs")] == 7  # k = 0..6
        assert counts.loc[(0.35, "lasso")] == 10
        assert (curve["reps"] == 2).all()
        assert (curve.loc[curve["index"] == 0, "nnz_mean"] == 0).all()

    def test_same_seed_is_byte_identical(self, scenario, tmp_path):
        assert _simulate(scenario, tmp_path / "a", "--methods", "lasso,bs") == 0
        assert _simulate(scenario, tmp_path / "b", "--methods", "lasso,bs") == 0
        assert (tmp_path / "a" / "long.csv").read_bytes() == (tmp_path / "b" / "long.csv").read_bytes()
        assert (tmp_path / "a" / "summary.csv").read_bytes() == (tmp_path / "b" / "summary.csv").read_bytes()

    def test_seed_flag_changes_results(self, scenario, tmp_path):
        _simulate(scenario, tmp_path / "a", "--methods", "fs")
        _simulate(scenario, tmp_path / "b", "--methods", "fs", "--seed", "4")
        assert (tmp_path / "a" / "long.csv").read_bytes() != (tmp_path / "b" / "long.csv").read_bytes()

    def test_refuses_to_overwrite(self, scenario, tmp_path):
        out = tmp_path / "run"
        assert _simulate(scenario, out, "--methods", "fs") == 0
        assert _simulate(scenario, out, "--methods", "fs") == 2
        assert _simulate(scenario, out, "--methods", "fs", "--force") == 0

    def test_malformed_scenario(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "setting": "low",\n  "snr": [0.1,\n')
        assert _simulate(bad, tmp_path / "out") == 2
        assert "bad.json" in capsys.readouterr().err

    def test_invalid_field_names_the_field(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({**TINY, "rho": 1.5}, indent=2))
        assert _simulate(bad, tmp_path / "out") == 2
        assert "rho" in capsys.readouterr().err

    def test_missing_scenario(self, tmp_path):
        assert _simulate(tmp_path / "nope.json", tmp_path / "out") == 2

    def test_unknown_method(self, scenario, tmp_path):
        assert _simulate(scenario, tmp_path / "out", "--methods", "ridge") == 2

    def test_partial_failure_exit_code(self, scenario, tmp_path, monkeypatch):
        def boom(self, X, Y, stream=None, grid=None):
            raise ValueError("solver exploded")

        monkeypatch.setattr(SubsetMethod, "solve", boom)
        out = tmp_path / "run"
        assert _simulate(scenario, out, "--methods", "lasso,bs") == 1
        long = pd.read_csv(out / "long.csv")
        assert set(long["method"]) == {"lasso"}

    def test_tuning_flag(self, scenario, tmp_path):
        out = tmp_path / "run"
        assert _simulate(scenario, out, "--methods", "fs", "--tuning", "oracle") == 0
        assert set(pd.read_csv(out / "long.csv")["tuning_rule"]) == {"oracle"}


class TestFit:
    @pytest.fixture
    def datasets(self, tmp_path):
        truth = GroundTruth.build(8, 3, 2, 0.35, 2.0)
        train = write_dataset_csv(sample_dataset(40, truth, np.random.default_rng(0)), tmp_path / "train.csv")
        val = write_dataset_csv(sample_dataset(40, truth, np.random.default_rng(1)), tmp_path / "val.csv")
        return train, val

    @pytest.mark.parametrize("method", ["lasso", "relaxo", "fs", "bs"])
    def test_fit_and_tune(self, datasets, tmp_path, method):
        train, val = datasets
        out = tmp_path / "fits"
        code = main(["fit", "--train", str(train), "--validation", str(val), "--method", method,
                     "--kmax", "5", "--nlambda", "10", "--out", str(out)])
        assert code == 0
        assert (out / f"{method}_path.csv").exists()
        tuned = pd.read_csv(out / f"{method}_tuned.csv")
        assert list(tuned["index"]) == list(range(1, 9))
        assert tuned.columns[0] == "path_index"
        assert list(tuned.columns[-2:]) == ["index", "value"]

    def test_lasso_support_file(self, datasets, tmp_path):
        train, _ = datasets
        out = tmp_path / "fits"
        assert main(["fit", "--train", str(train), "--method", "lasso", "--nlambda", "10", "--out", str(out)]) == 0
        support = pd.read_csv(out / "lasso_path_support.csv")
        assert len(support) == 10

    def test_width_mismatch(self, datasets, tmp_path):
        train, _ = datasets
        truth = GroundTruth.build(5, 2, 2, 0.0, 1.0)
        other = write_dataset_csv(sample_dataset(20, truth, np.random.default_rng(2)), tmp_path / "other.csv")
        code = main(["fit", "--train", str(train), "--validation", str(other), "--method", "fs",
                     "--out", str(tmp_path / "fits")])
        assert code == 2

    def test_ragged_csv(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x1,x2,y\n1,2,3\n4,5\n")
        assert main(["fit", "--train", str(bad), "--method", "fs", "--out", str(tmp_path / "fits")]) == 2


class TestReport:
    def test_merging_doubles_repetitions(self, scenario, tmp_path):
        run = tmp_path / "run"
        assert _simulate(scenario, run, "--methods", "fs") == 0
        out = tmp_path / "merged"
        assert main(["report", str(run / "long.csv"), str(run / "long.csv"), "--out", str(out)]) == 0
        single = pd.read_csv(run / "summary.csv")
        merged = pd.read_csv(out / "summary.csv")
        assert list(merged["reps"]) == [2 * r for r in single["reps"]]
        np.testing.assert_allclose(merged["mean"], single["mean"], rtol=1e-12)
        assert (out / "tables" / "custom_rte.csv").exists()

    def test_schema_error(self, tmp_path, capsys):
        bad = tmp_path / "long.csv"
        bad.write_text("setting,n\nlow,100\n")
        assert main(["report", str(bad), "--out", str(tmp_path / "out")]) == 2
        assert "missing column" in capsys.readouterr().err


class TestDf:
    def test_curves(self, scenario, tmp_path):
        out = tmp_path / "df"
        code = main(["df", "--scenario", str(scenario), "--methods", "lasso,fs", "--reps", "5",
                     "--out", str(out)])
        assert code == 0
        frame = pd.read_csv(out / "df.csv")
        assert list(frame["method"].drop_duplicates()) == ["null", "ols", "lasso", "fs"]
        null = frame[frame["method"] == "null"]
        assert (null["df"] == 0).all()
        assert len(frame[frame["method"] == "fs"]) == 7


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
