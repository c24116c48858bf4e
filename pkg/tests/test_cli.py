import json
import subprocess
import sys

import numpy as np
import pytest

from riskchoice import DEFAULT_TRUE_COEFFS, GeneratorConfig, generate_dataset, latent_utility
from riskchoice.cli import main
from riskchoice.features import SYMBOLIC_NAMES
from riskchoice.glm import sigmoid
from riskchoice.scenario import write_dataset_csv


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture()
def dataset_csv(tmp_path):
    path = tmp_path / "dataset.csv"
    write_dataset_csv(generate_dataset(GeneratorConfig(n=400, seed=5)), path)
    return path


class TestGenerate:
    def test_default_size_and_rerun_identical(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert run_cli("generate", "--n", "5000", "--seed", "42", "--out", str(out_a)) == 0
        assert run_cli("generate", "--n", "5000", "--seed", "42", "--out", str(out_b)) == 0
        csv_a = (out_a / "dataset.csv").read_bytes()
        assert csv_a == (out_b / "dataset.csv").read_bytes()
        assert csv_a.decode().count("\n") == 5001
        meta = json.loads((out_a / "dataset.meta.json").read_text())
        assert meta["n"] == 5000 and meta["seed"] == 42

    def test_zero_n_is_usage_error(self, tmp_path):
        assert run_cli("generate", "--n", "0", "--out", str(tmp_path)) == 1

    def test_custom_coefficients(self, tmp_path):
        code = run_cli(
            "generate", "--n", "20", "--seed", "1",
            "--true-coeffs=-1e6,0,0,0,0", "--out", str(tmp_path),
        )
        assert code == 0
        rows = (tmp_path / "dataset.csv").read_text().splitlines()[1:]
        assert all(row.endswith(",0") for row in rows)

    def test_malformed_coefficients(self, tmp_path):
        assert run_cli("generate", "--true-coeffs", "1,2", "--out", str(tmp_path)) == 1
        assert run_cli("generate", "--true-coeffs", "a,b,c,d,e", "--out", str(tmp_path)) == 1

    def test_out_dir_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("RISKCHOICE_OUT", str(tmp_path / "envout"))
        assert run_cli("generate", "--n", "10", "--seed", "2") == 0
        assert (tmp_path / "envout" / "dataset.csv").exists()


class TestFit:
    def test_symbolic_fit_json_and_table(self, dataset_csv, tmp_path, capsys):
        assert run_cli("fit", "symbolic", str(dataset_csv), "--out", str(tmp_path)) == 0
        doc = json.loads((tmp_path / "symbolic_model.json").read_text())
        assert doc["model"] == "symbolic"
        assert doc["features"] == list(SYMBOLIC_NAMES)
        assert len(doc["coeffs"]) == 5
        table = capsys.readouterr().out
        assert "intercept" in table and "coeff" in table

    def test_cpt_fit_deterministic(self, dataset_csv, tmp_path):
        for sub in ("a", "b"):
            code = run_cli(
                "fit", "cpt", str(dataset_csv),
                "--restarts", "3", "--cpt-seed", "7", "--out", str(tmp_path / sub),
            )
            assert code == 0
        assert (tmp_path / "a" / "cpt_model.json").read_bytes() == (
            tmp_path / "b" / "cpt_model.json"
        ).read_bytes()
        doc = json.loads((tmp_path / "a" / "cpt_model.json").read_text())
        assert doc["model"] == "cpt"
        assert set(("alpha", "beta", "lambda", "gamma", "eta")) <= set(doc)
        assert len(doc["restarts"]) == 3

    def test_missing_probability_column_is_parse_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("id,safe,risky,frame,choice\n0,1,2,1,0\n")
        assert run_cli("fit", "blackbox", str(bad), "--out", str(tmp_path)) == 2

    def test_missing_file(self, tmp_path):
        assert run_cli("fit", "symbolic", str(tmp_path / "nope.csv")) == 2

    def test_collinear_design_is_numerical_error(self, tmp_path):
        # frame constant +1 duplicates the intercept column
        rows = ["id,safe,risky,p,frame,choice"]
        rng = np.random.Generator(np.random.PCG64(3))
        for i in range(40):
            rows.append(f"{i},{rng.uniform(0, 100):.6f},{rng.uniform(0, 150):.6f},0.5,1,{i % 2}")
        path = tmp_path / "flat.csv"
        path.write_text("\n".join(rows) + "\n")
        assert run_cli("fit", "symbolic", str(path), "--out", str(tmp_path)) == 3

    def test_unknown_model_is_usage_error(self, dataset_csv):
        assert run_cli("fit", "oracle", str(dataset_csv)) == 1


class TestEvaluate:
    def test_true_model_matches_bayes_rate(self, tmp_path):
        cfg = GeneratorConfig(n=20_000, seed=9)
        data = generate_dataset(cfg)
        csv_path = tmp_path / "dataset.csv"
        write_dataset_csv(data, csv_path)
        model_path = tmp_path / "true_model.json"
        model_path.write_text(
            json.dumps(
                {
                    "model": "symbolic",
                    "features": list(SYMBOLIC_NAMES),
                    "coeffs": list(DEFAULT_TRUE_COEFFS),
                }
            )
        )
        assert run_cli("evaluate", str(model_path), str(csv_path), "--out", str(tmp_path)) == 0
        metrics = json.loads((tmp_path / "metrics.json").read_text())

        probs = np.array([sigmoid(latent_utility(s, cfg.true_coeffs)) for s in data])
        bayes = float(np.mean(np.maximum(probs, 1 - probs)))
        assert metrics["n_test"] == 20_000
        assert abs(metrics["accuracy"] - bayes) < 0.01

    def test_single_class_auc_is_null(self, tmp_path):
        cfg = GeneratorConfig(n=50, seed=3, true_coeffs=(1e6, 0, 0, 0, 0))
        csv_path = tmp_path / "ones.csv"
        write_dataset_csv(generate_dataset(cfg), csv_path)
        model_path = tmp_path / "m.json"
        model_path.write_text(
            json.dumps(
                {"model": "symbolic", "features": list(SYMBOLIC_NAMES), "coeffs": [0, 0, 0, 0, 0]}
            )
        )
        assert run_cli("evaluate", str(model_path), str(csv_path), "--out", str(tmp_path)) == 0
        metrics = json.loads((tmp_path / "metrics.json").read_text())
        assert metrics["auc"] is None
        assert metrics["accuracy"] == 1.0  # probs 0.5 predict risky; choices are all risky

    def test_cpt_model_document(self, dataset_csv, tmp_path):
        model_path = tmp_path / "cpt.json"
        model_path.write_text(
            json.dumps(
                {"model": "cpt", "alpha": 0.8, "beta": 0.8, "lambda": 1.5, "gamma": 1.0, "eta": 0.1}
            )
        )
        assert run_cli("evaluate", str(model_path), str(dataset_csv), "--out", str(tmp_path)) == 0
        metrics = json.loads((tmp_path / "metrics.json").read_text())
        assert 0.0 <= metrics["accuracy"] <= 1.0

    def test_unknown_feature_name_is_input_error(self, dataset_csv, tmp_path):
        model_path = tmp_path / "weird.json"
        model_path.write_text(
            json.dumps({"model": "symbolic", "features": ["intercept", "zig"], "coeffs": [0, 1]})
        )
        assert run_cli("evaluate", str(model_path), str(dataset_csv), "--out", str(tmp_path)) == 2

    def test_malformed_model_json(self, dataset_csv, tmp_path):
        model_path = tmp_path / "broken.json"
        model_path.write_text("{not json")
        assert run_cli("evaluate", str(model_path), str(dataset_csv)) == 2
        model_path.write_text(json.dumps({"model": "cpt", "alpha": 0.5}))
        assert run_cli("evaluate", str(model_path), str(dataset_csv)) == 2


class TestExperiment:
    def test_small_run_writes_everything(self, tmp_path):
        code = run_cli(
            "experiment", "--n", "700", "--restarts", "2", "--no-svg", "--out", str(tmp_path)
        )
        assert code == 0
        for name in ("report.json", "table1.csv", "reflection.csv", "dataset.csv"):
            assert (tmp_path / name).exists()

    def test_config_file_and_flag_precedence(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "generator": {"n": 500, "seed": 8},
                    "cpt": {"n_restarts": 2},
                    "emit_svg": False,
                }
            )
        )
        out_a = tmp_path / "a"
        assert run_cli("experiment", "--config", str(cfg_path), "--out", str(out_a)) == 0
        assert json.loads((out_a / "report.json").read_text())["config"]["generator"]["n"] == 500

        out_b = tmp_path / "b"
        code = run_cli(
            "experiment", "--config", str(cfg_path), "--n", "320", "--out", str(out_b)
        )
        assert code == 0
        doc = json.loads((out_b / "report.json").read_text())
        assert doc["config"]["generator"]["n"] == 320
        assert doc["config"]["generator"]["seed"] == 8
        assert len((out_b / "dataset.csv").read_text().splitlines()) == 321

    def test_unknown_config_key_is_usage_error(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"tau": 0.2}))
        assert run_cli("experiment", "--config", str(cfg_path), "--out", str(tmp_path)) == 1

    def test_missing_config_file(self, tmp_path):
        assert run_cli("experiment", "--config", str(tmp_path / "nope.json")) == 1


class TestUsage:
    def test_no_arguments(self):
        assert main([]) == 1

    def test_unknown_flag(self, tmp_path):
        assert run_cli("generate", "--frobnicate", "--out", str(tmp_path)) == 1


def test_module_entry_point(tmp_path):
    # the package runs as a subprocess through the module entry
    result = subprocess.run(
        [sys.executable, "-m", "riskchoice.cli", "generate", "--n", "5", "--seed", "1",
         "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert (tmp_path / "dataset.csv").exists()
    assert result.stdout == ""  # data goes to files, diagnostics to stderr
