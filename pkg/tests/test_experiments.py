import os

import pytest

from netzo.cli import main
from netzo.config import parse_config_text
from netzo.csvio import read_csv
from netzo.experiments import (ExperimentSpec, load_experiment, metrics_filename,
                               run_experiment, summarize, trajectory_filename)

MINI_QUADRATIC = """
experiment.name = mini
experiment.seeds = 1,2
experiment.gammas = 0.7,1.0
graph.kind = ring
graph.n = 5
problem.kind = quadratic
problem.dim = 8
estimator.kind = two-point
estimator.n_c = 4
step.kind = pl
radius.kind = pl
run.T = 40
"""

MINI_SOURCE = """
experiment.name = mini_source
experiment.seeds = 1
experiment.gammas = 0.7
graph.kind = ring
graph.n = 5
problem.kind = source_seeking
estimator.kind = two-point
estimator.n_c = 2
step.kind = constant
step.value = 0.1
radius.kind = constant
radius.value = 0.3
run.T = 25
"""


@pytest.fixture
def mini_spec(tmp_path):
    conf = parse_config_text(MINI_QUADRATIC)
    return ExperimentSpec(name="mini", conf=conf, seeds=[1, 2], gammas=[0.7, 1.0],
                          out_dir=str(tmp_path / "out"), quiet=True)


class TestRunExperiment:
    def test_file_count_contract(self, mini_spec):
        written = run_experiment(mini_spec)
        names = sorted(os.path.basename(p) for p in written)
        assert names == sorted(
            [metrics_filename(s, g) for s in (1, 2) for g in (0.7, 1.0)]
            + ["summary.csv", "comparison.csv"]
        )

    def test_budget_parity_recorded(self, mini_spec):
        run_experiment(mini_spec)
        budgets = set()
        for gamma in (0.7, 1.0):
            meta, header, rows = read_csv(
                os.path.join(mini_spec.out_dir, metrics_filename(1, gamma)))
            budgets.add((rows[-1]["function_queries"], rows[-1]["scalar_transmissions"]))
        assert len(budgets) == 1

    def test_deterministic_outputs(self, tmp_path):
        conf = parse_config_text(MINI_QUADRATIC)
        outs = []
        for sub in ("a", "b"):
            spec = ExperimentSpec(name="mini", conf=conf, seeds=[1], gammas=[0.7],
                                  out_dir=str(tmp_path / sub), quiet=True)
            run_experiment(spec)
            outs.append((tmp_path / sub / metrics_filename(1, 0.7)).read_bytes())
        assert outs[0] == outs[1]

    def test_source_runs_emit_trajectories(self, tmp_path):
        spec = ExperimentSpec(name="mini_source", conf=parse_config_text(MINI_SOURCE),
                              seeds=[1], gammas=[0.7], out_dir=str(tmp_path), quiet=True)
        written = run_experiment(spec)
        tpath = os.path.join(str(tmp_path), trajectory_filename(1, 0.7))
        assert tpath in written
        meta, header, rows = read_csv(tpath)
        assert header == ["k", "agent", "x1", "x2"]
        assert "field_amplitudes" in meta and "agent_positions" in meta
        assert len(rows) == 26 * 5  # (T+1) snapshots x agents


class TestSummarize:
    def test_matches_experiment_summary(self, mini_spec):
        run_experiment(mini_spec)
        rows, comparison = summarize(mini_spec.out_dir)
        assert len(rows) == 4
        meta, header, written = read_csv(os.path.join(mini_spec.out_dir, "summary.csv"))
        recomputed = {(r[1], r[2]): r for r in rows}
        for row in written:
            key = (row["seed"], row["gamma"])
            assert recomputed[key][4] == pytest.approx(row["final_f_avg"], rel=1e-12)
        assert len(comparison) == 2  # one 0.7-vs-1.0 pair per seed

    def test_empty_input(self, tmp_path):
        rows, comparison = summarize(str(tmp_path))
        assert rows == [] and comparison == []


class TestCli:
    def test_run_and_summarize_exit_codes(self, tmp_path):
        cfg = tmp_path / "mini.cfg"
        cfg.write_text(MINI_QUADRATIC)
        out = tmp_path / "runs"
        assert main(["run", str(cfg), "--out", str(out), "--quiet"]) == 0
        assert main(["summarize", str(out), "--quiet",
                     "--out", str(tmp_path / "sum.csv")]) == 0
        assert (tmp_path / "sum.csv").exists()

    def test_seed_and_gamma_flags_narrow_the_grid(self, tmp_path):
        cfg = tmp_path / "mini.cfg"
        cfg.write_text(MINI_QUADRATIC)
        out = tmp_path / "runs"
        assert main(["run", str(cfg), "--seed", "7", "--gamma", "0.8",
                     "--out", str(out), "--quiet"]) == 0
        files = sorted(os.listdir(out))
        assert files == [metrics_filename(7, 0.8), "summary.csv"]

    def test_validation_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(MINI_QUADRATIC.replace("graph.n = 5", "graph.n = -2"))
        assert main(["run", str(cfg), "--quiet"]) == 2
        assert "error" in capsys.readouterr().err

    def test_divergence_exit_code(self, tmp_path):
        cfg = tmp_path / "div.cfg"
        cfg.write_text(MINI_QUADRATIC.replace("step.kind = pl", "step.kind = constant")
                       .replace("radius.kind = pl", "radius.kind = constant")
                       + "\nstep.value = 1e200\nradius.value = 0.01\n")
        assert main(["run", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]) == 3

    def test_unknown_config_exit_code(self):
        assert main(["run", "definitely_missing.cfg", "--quiet"]) == 2

    def test_env_var_default_out(self, tmp_path, monkeypatch):
        monkeypatch.setenv("NETZO_OUT", str(tmp_path / "envout"))
        cfg = tmp_path / "mini.cfg"
        cfg.write_text(MINI_QUADRATIC)
        spec = load_experiment(str(cfg), seed=1, gamma=0.7, quiet=True)
        assert spec.out_dir == os.path.join(str(tmp_path / "envout"), "mini")
