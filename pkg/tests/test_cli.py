import json

import numpy as np
import pytest

from longfair.cli import main
from longfair.classifier import StochasticLinearClassifier
from longfair.data import read_csv

WORLD = {"alpha": 0.9, "seed": 3}


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def behavior_model(tmp_path):
    cfg = _write(tmp_path / "train.json",
                 {"world": WORLD, "n_train": 400, "steps": 20,
                  "learning_rate": 0.05})
    out = tmp_path / "beta.json"
    assert main(["train-behavior", "--config", cfg, "--out", str(out)]) == 0
    return out


@pytest.fixture
def dataset_csv(tmp_path, behavior_model):
    cfg = _write(tmp_path / "gen.json",
                 {"world": WORLD, "behavior_model": str(behavior_model),
                  "n": 300})
    out = tmp_path / "data.csv"
    assert main(["gen-data", "--config", cfg, "--out", str(out),
                 "--seed", "5"]) == 0
    return out


def _run_config(tmp_path, dataset_csv, behavior_model, taus, n_gens=10):
    return _write(tmp_path / "run.json", {
        "dataset": str(dataset_csv),
        "behavior_model": str(behavior_model),
        "constraints": [
            {"predicate": {"kind": "group_equals", "value": g},
             "tau": taus[g], "delta": 0.1, "bound": {"method": "ttest"},
             "name": f"g{g}"}
            for g in (0, 1)
        ],
        "search": {"generations": n_gens},
        "seed": 11,
    })


class TestPipeline:
    def test_gen_data_writes_readable_csv(self, dataset_csv):
        d = read_csv(dataset_csv, L=2, G=2)
        assert d.n == 300 and d.d == 5

    def test_run_trivially_satisfiable(self, tmp_path, dataset_csv,
                                       behavior_model, capsys):
        cfg = _run_config(tmp_path, dataset_csv, behavior_model,
                          {0: -1e6, 1: -1e6})
        out = tmp_path / "model.json"
        assert main(["run", "--config", cfg, "--out", str(out)]) == 0
        assert capsys.readouterr().out.strip() == str(out)
        model = StochasticLinearClassifier.from_json(out.read_text())
        assert model.L == 2 and model.d == 5

    def test_run_tiny_dataset_prints_nsf(self, tmp_path, behavior_model,
                                         capsys):
        gen = _write(tmp_path / "gen16.json",
                     {"world": WORLD, "behavior_model": str(behavior_model),
                      "n": 16})
        data16 = tmp_path / "d16.csv"
        assert main(["gen-data", "--config", gen, "--out", str(data16),
                     "--seed", "1"]) == 0
        capsys.readouterr()
        cfg = _run_config(tmp_path, data16, behavior_model, {0: 2.0, 1: 1.0})
        out = tmp_path / "never.json"
        assert main(["run", "--config", cfg, "--out", str(out)]) == 0
        assert capsys.readouterr().out.strip() == "NSF"
        assert not out.exists()

    def test_eval_prints_json(self, tmp_path, behavior_model, capsys):
        cfg = _write(tmp_path / "eval.json", {
            "model": str(behavior_model),
            "world": WORLD,
            "population_size": 2000,
            "seed": 2,
            "constraints": [
                {"predicate": {"kind": "group_equals", "value": g},
                 "tau": 1.0, "delta": 0.1, "bound": {"method": "ttest"}}
                for g in (0, 1)
            ],
        })
        assert main(["eval", "--config", cfg]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"g", "accuracy"}
        assert len(payload["g"]) == 2
        assert 0.0 < payload["accuracy"] < 1.0


class TestThinShell:
    def test_run_matches_library_call(self, tmp_path, dataset_csv,
                                      behavior_model, capsys):
        """The CLI is a thin shell: `run` returns the same parameters as
        the equivalent library invocation."""
        import json as _json

        from longfair.bounds import TTest
        from longfair.candidate import SearchConfig
        from longfair.data import GroupEquals
        from longfair.driver import ElfConfig, run_elf
        from longfair.estimation import DIConstraint

        cfg = _run_config(tmp_path, dataset_csv, behavior_model,
                          {0: -1e6, 1: -1e6})
        out = tmp_path / "cli_model.json"
        assert main(["run", "--config", cfg, "--out", str(out)]) == 0
        capsys.readouterr()
        cli_theta = StochasticLinearClassifier.from_json(out.read_text()).theta

        beta = StochasticLinearClassifier.from_json(
            behavior_model.read_text())
        dataset = read_csv(dataset_csv, L=2, G=2)
        constraints = tuple(
            DIConstraint(GroupEquals(g), -1e6, 0.1, TTest(), name=f"g{g}")
            for g in (0, 1))
        outcome = run_elf(dataset, beta,
                          ElfConfig(constraints,
                                    search=SearchConfig(generations=10),
                                    seed=11))
        assert outcome.is_solution
        assert np.array_equal(cli_theta, outcome.theta)


class TestSweepCommand:
    def test_byte_identical_reruns(self, tmp_path, capsys):
        cfg = _write(tmp_path / "sweep.json", {
            "alphas": [0.9], "ns": [32, 64], "trials": 3,
            "eval_population_size": 1000, "behavior_train_n": 200,
            "search": {"generations": 4}, "base_seed": 9,
        })
        out1, out2 = tmp_path / "s1", tmp_path / "s2"
        assert main(["sweep", "--config", cfg, "--out", str(out1),
                     "--jobs", "2"]) == 0
        assert main(["sweep", "--config", cfg, "--out", str(out2),
                     "--jobs", "1"]) == 0
        for name in ("records.csv", "aggregate.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestErrorHandling:
    def test_missing_config_exits_one(self, capsys):
        assert main(["run", "--config", "/nonexistent.json",
                     "--out", "/tmp/x"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_invalid_json_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["run", "--config", str(bad), "--out", "/tmp/x"]) == 1

    def test_missing_key_exits_one(self, tmp_path, capsys):
        cfg = _write(tmp_path / "incomplete.json", {"world": WORLD})
        assert main(["gen-data", "--config", cfg, "--out", "/tmp/x"]) == 1
        assert "behavior_model" in capsys.readouterr().err
