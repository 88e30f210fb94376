"""Tests for seeds, experiment configuration, the experiment harness and the CLI."""

import json

import pandas as pd
import pytest

from activebn.cli import ExperimentConfig, derive_rng, main, run_experiment
from activebn.cli.experiment import MANIFEST_FILE
from activebn.cli.reports import SUMMARY_FILE, read_trial_frames, summarize
from activebn.data import read_dataset, read_network, write_network
from activebn.exceptions import ConfigError, DatasetFormatError

SMALL_LOOP = {
    "steps": 1,
    "initial_observational": 10,
    "committee_size": 2,
    "bootstrap_eval_count": 2,
    "predictive_sizes": [0, 1],
    "predictive_trials": 2,
    "estimation": "exact",
}


@pytest.fixture
def net_path(chain, tmp_path):
    return write_network(tmp_path / "true.json", chain)


@pytest.fixture
def small_config(net_path, tmp_path):
    return ExperimentConfig.create(
        overrides={
            "network": str(net_path),
            "strategies": ["passive", "active:kl2"],
            "trials": 2,
            "seed": 5,
            "output_dir": str(tmp_path / "out"),
            "loop": SMALL_LOOP,
            "search": {"restarts": 1},
        }
    )


class TestSeeds:
    def test_same_labels_same_stream(self):
        assert derive_rng(3, 0, "initial").integers(1 << 30) == derive_rng(3, 0, "initial").integers(1 << 30)

    def test_labels_and_seed_separate_streams(self):
        draws = {
            int(derive_rng(seed, *labels).integers(1 << 62))
            for seed, labels in [(3, (0, "initial")), (3, (1, "initial")), (4, (0, "initial")), (3, ("0", "initial"))]
        }
        assert len(draws) == 4


class TestExperimentConfig:
    def test_overrides_beat_file_values(self, net_path, tmp_path):
        config_file = tmp_path / "exp.json"
        config_file.write_text(json.dumps({"network": "true.json", "seed": 1, "trials": 3, "loop": {"steps": 4}}))
        cfg = ExperimentConfig.create(
            config_file=config_file, overrides={"trials": 7, "seed": None, "loop": {"committee_size": 3}}
        )
        assert cfg.trials == 7
        assert cfg.seed == 1
        assert cfg.loop.steps == 4
        assert cfg.loop.committee_size == 3
        assert cfg.network == net_path

    def test_manifest_config_is_accepted(self, small_config, tmp_path):
        result = run_experiment(small_config.model_copy(update={"trials": 1, "strategies": ("passive",)}))
        cfg = ExperimentConfig.create(config_file=result.manifest_path)
        assert cfg.seed == small_config.seed
        assert cfg.loop == small_config.loop

    def test_strategies_are_normalized(self, net_path):
        cfg = ExperimentConfig.create(overrides={"network": str(net_path), "seed": 0, "strategies": ["Active:JS", "random:1"]})
        assert cfg.strategies == ("active:js", "random:1")
        assert [s.label for s in cfg.parsed_strategies] == ["active:js", "random:1"]

    @pytest.mark.parametrize(
        "overrides",
        [
            {"network": "x.json"},
            {"seed": 1},
            {"network": "x.json", "seed": 1, "strategies": ["greedy"]},
            {"network": "x.json", "seed": 1, "strategies": ["passive", "passive"]},
            {"network": "x.json", "seed": -1},
            {"network": "x.json", "seed": 1, "loop": {"unknown": 1}},
        ],
    )
    def test_invalid_configs(self, overrides):
        with pytest.raises(ConfigError):
            ExperimentConfig.create(overrides=overrides)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError, match="Failed to read"):
            ExperimentConfig.create(config_file=tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        with pytest.raises(ConfigError, match="not valid JSON"):
            ExperimentConfig.create(config_file=path)


class TestRunExperiment:
    def test_zero_steps_gives_one_row_per_strategy(self, small_config):
        cfg = small_config.model_copy(update={"loop": small_config.loop.model_copy(update={"steps": 0})})
        result = run_experiment(cfg)
        for path in result.trial_paths:
            frame = pd.read_csv(path)
            assert frame["strategy"].tolist() == ["passive", "active:kl2"]
            assert frame["step"].tolist() == [0, 0]

    def test_outputs_and_summary(self, small_config):
        result = run_experiment(small_config)
        out = result.output_dir
        assert sorted(p.name for p in out.iterdir()) == [MANIFEST_FILE, SUMMARY_FILE, "trial_0.csv", "trial_1.csv"]
        assert b"\r\n" not in (out / SUMMARY_FILE).read_bytes()

        summary = result.summary
        assert summary["stat"].tolist() == ["trial:0", "trial:1", "mean", "std"] * 2
        passive = summary[summary["strategy"] == "passive"].set_index("stat")
        errors = passive.loc[["trial:0", "trial:1"], "edge_error"]
        assert passive.loc["std", "edge_error"] == pytest.approx(errors.std(ddof=1))
        assert passive.loc["mean", "edge_error"] == pytest.approx(errors.mean())

        manifest = json.loads((out / MANIFEST_FILE).read_text())
        assert manifest["config"]["seed"] == 5
        assert "version" in manifest

    def test_worker_count_does_not_change_results(self, small_config, tmp_path):
        serial = run_experiment(small_config.model_copy(update={"output_dir": tmp_path / "serial"}), jobs=1)
        parallel = run_experiment(small_config.model_copy(update={"output_dir": tmp_path / "parallel"}), jobs=2)
        for a, b in zip(serial.trial_paths, parallel.trial_paths, strict=True):
            assert a.read_text() == b.read_text()
        assert serial.summary_path.read_text() == parallel.summary_path.read_text()

    def test_rerun_is_identical(self, small_config, tmp_path):
        first = run_experiment(small_config.model_copy(update={"output_dir": tmp_path / "a"}))
        second = run_experiment(small_config.model_copy(update={"output_dir": tmp_path / "b"}))
        assert first.summary_path.read_text() == second.summary_path.read_text()

    def test_summarize_recomputes_from_files(self, small_config):
        result = run_experiment(small_config)
        recomputed = summarize(read_trial_frames(result.output_dir))
        pd.testing.assert_frame_equal(recomputed, pd.read_csv(result.summary_path), check_dtype=False)

    def test_no_trial_files(self, tmp_path):
        with pytest.raises(DatasetFormatError):
            read_trial_frames(tmp_path)


class TestMain:
    def test_gen_net(self, tmp_path, capsys):
        out = tmp_path / "net.json"
        assert main(["gen-net", "--seed", "1", "--n-vars", "5", "--max-edges", "4", "--out", str(out)]) == 0
        net = read_network(out)
        assert net.n_vars == 5
        assert net.dag.edge_count <= 4
        assert "Wrote network" in capsys.readouterr().out

    def test_gen_net_is_reproducible(self, tmp_path):
        for name in ("a.json", "b.json"):
            main(["gen-net", "--seed", "9", "--n-vars", "4", "--out", str(tmp_path / name)])
        assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()

    def test_sample_with_query(self, net_path, tmp_path):
        out = tmp_path / "data.csv"
        assert main(["sample", "--seed", "2", "--net", str(net_path), "--n", "30", "--query", "A=1", "--out", str(out)]) == 0
        ds = read_dataset(out, read_network(net_path).variables)
        assert len(ds) == 30
        assert (ds.values[:, 0] == 1).all()
        assert ds.intervened[:, 0].all()
        assert not ds.intervened[:, 1].any()

    def test_learn_committee_and_queries(self, net_path, tmp_path, capsys):
        data = tmp_path / "data.csv"
        main(["sample", "--seed", "3", "--net", str(net_path), "--n", "200", "--out", str(data)])
        learned = tmp_path / "learned.json"
        assert main(["learn", "--seed", "3", "--net", str(net_path), "--data", str(data), "--out", str(learned)]) == 0
        assert read_network(learned).n_vars == 2

        committee = tmp_path / "committee"
        assert main([
            "committee", "--seed", "3", "--net", str(net_path), "--data", str(data),
            "--committee-size", "3", "--out", str(committee),
        ]) == 0  # fmt: skip
        capsys.readouterr()

        assert main(["measures", "--seed", "3", "--committee", str(committee), "--exact"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert [line.split()[0] for line in lines] == ["js", "bjs", "kl2"]

        assert main(["score-query", "--seed", "3", "--committee", str(committee), "--query", "B=0"]) == 0
        assert capsys.readouterr().out.startswith("B=0:")

        assert main(["propose-query", "--seed", "3", "--committee", str(committee), "--budget", "1"]) == 0
        assert "nats" in capsys.readouterr().out

    def test_eval(self, net_path, tmp_path, capsys):
        data = tmp_path / "data.csv"
        main(["sample", "--seed", "4", "--net", str(net_path), "--n", "50", "--out", str(data)])
        capsys.readouterr()
        code = main([
            "eval", "--seed", "4", "--net", str(net_path), "--data", str(data),
            "--bootstrap", "3", "--sizes", "0", "1", "5", "--trials", "2", "--exact",
        ])  # fmt: skip
        assert code == 0
        out = capsys.readouterr().out
        assert "edge_error:" in out
        assert "pkl5: n/a" in out

    def test_active_and_report(self, net_path, tmp_path):
        out = tmp_path / "runs"
        code = main([
            "active", "--seed", "6", "--net", str(net_path), "--strategy", "passive",
            "--strategy", "random:1", "--steps", "0", "--trials", "2", "--out", str(out),
        ])  # fmt: skip
        assert code == 0
        summary = pd.read_csv(out / SUMMARY_FILE)
        (out / SUMMARY_FILE).unlink()
        assert main(["report", "--out", str(out)]) == 0
        pd.testing.assert_frame_equal(pd.read_csv(out / SUMMARY_FILE), summary)

    def test_missing_seed_is_a_usage_error(self, net_path, tmp_path):
        with pytest.raises(SystemExit) as exc_info:
            main(["sample", "--net", str(net_path), "--out", str(tmp_path / "x.csv")])
        assert exc_info.value.code == 2

    def test_config_error_exits_with_two(self, capsys):
        assert main(["active", "--seed", "1"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_runtime_error_exits_with_one(self, tmp_path, capsys):
        assert main(["sample", "--seed", "1", "--net", str(tmp_path / "missing.json"), "--out", str(tmp_path / "x.csv")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_option_value_exits_with_two(self, net_path, tmp_path):
        data = tmp_path / "data.csv"
        main(["sample", "--seed", "1", "--net", str(net_path), "--n", "20", "--out", str(data)])
        code = main(["learn", "--seed", "1", "--net", str(net_path), "--data", str(data), "--out", str(tmp_path / "l.json"), "--ess", "0"])
        assert code == 2

    def test_negative_seed_is_a_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["gen-net", "--seed", "-1", "--n-vars", "3", "--out", str(tmp_path / "net.json")])
        assert exc_info.value.code == 2
        assert "non-negative" in capsys.readouterr().err
        assert not (tmp_path / "net.json").exists()

    def test_active_takes_its_measure_from_the_strategy(self, net_path, tmp_path):
        with pytest.raises(SystemExit) as exc_info:
            main(["active", "--seed", "1", "--net", str(net_path), "--measure", "js", "--out", str(tmp_path / "r")])
        assert exc_info.value.code == 2

    def test_active_estimation_flags_reach_the_manifest(self, net_path, tmp_path):
        out = tmp_path / "runs"
        code = main([
            "active", "--seed", "3", "--net", str(net_path), "--strategy", "passive", "--steps", "0",
            "--trials", "1", "--estimation", "sampled", "--samples", "300", "--out", str(out),
        ])  # fmt: skip
        assert code == 0
        manifest = json.loads((out / MANIFEST_FILE).read_text())
        assert manifest["config"]["loop"]["estimation"] == "sampled"
        assert manifest["config"]["loop"]["n_samples"] == 300
