"""Harness: loop ordering, CSV schemas, ablation equivalence, CLI."""

import csv
import os

import numpy as np
import pytest

from curioreplay import HrbtsBuffer, config_load, run_experiment, run_matrix
from curioreplay.cli import main as cli_main
from curioreplay.detector import DetectorStep
from curioreplay.harness import build_components
from curioreplay.rng import Rng

from helpers import fig2_style_stream, FIG2_CHANGES

DESK_DOC = """
[schedule]
change_steps = [0, 400, 1200]
values = [1.0, 1.4, 1.8]

[buffer]
kind = "hrb"
size = 400

[detector]
window = 50
idle_threshold = 200

[curiosity]
ensemble_size = 1
hidden = [8, 8]
batch_size = 16
fifo_capacity = 100

[learner]
policy = "sac"
hidden = [8, 8]
batch_size = 32
warmup_steps = 200

[harness]
total_steps = 1500
eval_interval = 750
eval_episodes = 2
snapshot_steps = [750, 1500]
seed = 11
"""


def desk_config(tmp_path, **overrides):
    cfg = config_load(DESK_DOC)
    for key, value in overrides.items():
        section, name = key.split("__")
        setattr(getattr(cfg, section), name, value)
    if "harness__total_steps" in overrides and "harness__snapshot_steps" not in overrides:
        cfg.harness.snapshot_steps = [cfg.harness.total_steps]
    cfg.harness.out_dir = str(tmp_path)
    return cfg


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestRunOutputs:
    def test_csvs_exist_and_conform(self, tmp_path):
        cfg = desk_config(tmp_path / "run")
        summary = run_experiment(cfg)
        cur = read_rows(os.path.join(summary.out_dir, "curiosity.csv"))
        assert len(cur) == cfg.harness.total_steps
        assert list(cur[0]) == ["t", "c", "mu", "snr", "candidate", "boundary"]
        assert all(row["candidate"] in ("0", "1") and row["boundary"] in ("0", "1")
                   for row in cur[:100])
        assert [int(r["t"]) for r in cur[:5]] == [0, 1, 2, 3, 4]
        assert all(float(r["c"]) >= 0.0 for r in cur)

        comp = read_rows(os.path.join(summary.out_dir, "composition.csv"))
        assert list(comp[0]) == ["snapshot_t", "buffer_kind", "task_label", "count", "ratio"]
        for snap in {r["snapshot_t"] for r in comp}:
            for kind in {r["buffer_kind"] for r in comp}:
                ratios = [float(r["ratio"]) for r in comp
                          if r["snapshot_t"] == snap and r["buffer_kind"] == kind]
                if ratios:
                    assert sum(ratios) == pytest.approx(1.0, abs=1e-9)
        assert {r["buffer_kind"] for r in comp} == {"hrb", "hrb/retained"}

        rew = read_rows(os.path.join(summary.out_dir, "rewards.csv"))
        assert list(rew[0]) == ["eval_t", "task_label", "mean_return", "std_return", "episodes"]
        assert {int(r["task_label"]) for r in rew} == {0, 1, 2}
        assert {int(r["eval_t"]) for r in rew} == {750, 1500}

        bounds = read_rows(os.path.join(summary.out_dir, "boundaries.csv"))
        assert [int(r["t"]) for r in bounds] == summary.boundaries

    def test_byte_identical_reruns(self, tmp_path):
        cfg_a = desk_config(tmp_path / "a")
        cfg_b = desk_config(tmp_path / "b")
        run_experiment(cfg_a)
        run_experiment(cfg_b)
        for name in ("curiosity.csv", "composition.csv", "rewards.csv", "boundaries.csv"):
            with open(tmp_path / "a" / name, "rb") as fh:
                a = fh.read()
            with open(tmp_path / "b" / name, "rb") as fh:
                b = fh.read()
            assert a == b, name

    def test_different_seed_changes_outputs(self, tmp_path):
        a = run_experiment(desk_config(tmp_path / "a"))
        b = run_experiment(desk_config(tmp_path / "b"), seed=12)
        assert a.final_composition != b.final_composition


class _OracleDetector:
    """Fires exactly at the configured global steps."""

    def __init__(self, fire_at):
        self.fire_at = set(fire_at)
        self.t = -1

    def step(self, c):
        self.t += 1
        fire = self.t in self.fire_at
        return DetectorStep(fire, fire, 0.0, 0.0)


class _LoopSpy:
    def __init__(self, cfg):
        self.events = []
        rng = Rng(cfg.harness.seed)
        env, policy, estimator, detector, buffer = build_components(cfg, rng)
        spy = self

        class SpyEstimator:
            def observe(self, tr):
                spy.events.append(("observe", tr.timestep))
                return estimator.observe(tr)

        class SpyDetector:
            def step(self, c):
                spy.events.append(("detect", None))
                return detector.step(c)

        class SpyBuffer(HrbtsBuffer):
            def insert(self, tr, rng=None):
                spy.events.append(("insert", tr.timestep))
                return super().insert(tr, rng)

            def on_boundary(self, rng):
                spy.events.append(("on_boundary", None))
                return super().on_boundary(rng)

        self.components = (env, policy, SpyEstimator(), SpyDetector(),
                           SpyBuffer(cfg.buffer.size, cfg.buffer.fifo_fraction))


class TestLoopOrdering:
    def test_one_observe_detect_insert_per_step_in_order(self, tmp_path):
        cfg = desk_config(tmp_path, buffer__kind="hrbts", harness__total_steps=300)
        spy = _LoopSpy(cfg)
        run_experiment(cfg, components=spy.components)
        per_step = [e for e in spy.events if e[0] != "on_boundary"]
        assert len(per_step) == 3 * 300
        for t in range(300):
            chunk = per_step[3 * t: 3 * t + 3]
            assert [e[0] for e in chunk] == ["observe", "detect", "insert"]
            assert chunk[0][1] == t and chunk[2][1] == t

    def test_boundary_lands_before_same_step_insert(self, tmp_path):
        cfg = desk_config(tmp_path, buffer__kind="hrbts", harness__total_steps=200)
        spy = _LoopSpy(cfg)
        env, policy, estimator, _, buffer = spy.components
        components = (env, policy, estimator, _OracleDetector({60}), buffer)
        run_experiment(cfg, components=components)
        events = spy.events
        i_boundary = events.index(("on_boundary", None))
        assert events[i_boundary + 1] == ("insert", 60)
        assert events[i_boundary - 1] == ("observe", 60)
        assert buffer.task_count == 2


class TestAblation:
    def test_disabled_detector_hrbts_equals_hrb(self, tmp_path):
        base = dict(harness__total_steps=1200)
        cfg_hrb = desk_config(tmp_path / "hrb", buffer__kind="hrb", **base)
        cfg_ts = desk_config(tmp_path / "ts", buffer__kind="hrbts",
                             detector__enabled=False, **base)

        comps_hrb = build_components(cfg_hrb, Rng(cfg_hrb.harness.seed))
        comps_ts = build_components(cfg_ts, Rng(cfg_ts.harness.seed))
        run_experiment(cfg_hrb, components=comps_hrb)
        run_experiment(cfg_ts, components=comps_ts)

        hrb_items = sorted(tr.timestep for tr in comps_hrb[4].items())
        ts_items = sorted(tr.timestep for tr in comps_ts[4].items())
        assert hrb_items == ts_items
        assert read_rows(tmp_path / "ts" / "boundaries.csv") == []


class TestMatrix:
    def test_fan_out_and_aggregate(self, tmp_path):
        cfg = desk_config(tmp_path, learner__policy="random",
                          harness__total_steps=600, harness__eval_interval=600,
                          harness__snapshot_steps=[600])
        summaries = run_matrix(cfg, [1, 2, 3], out_dir=str(tmp_path))[0]
        assert len(summaries) == 3
        for seed in (1, 2, 3):
            assert os.path.isdir(tmp_path / f"seed_{seed}")
        agg = read_rows(tmp_path / "aggregate.csv")
        assert list(agg[0]) == ["metric", "task_label", "mean", "std"]

        # aggregate mean equals the hand-average of per-run values
        rows = {(r["metric"], int(r["task_label"])): r for r in agg}
        for label in (0, 1, 2):
            values = [s.final_returns[label][0] for s in summaries]
            assert float(rows[("final_return", label)]["mean"]) == pytest.approx(
                float(np.mean(values)), rel=1e-12)
        ratio_labels = {lbl for s in summaries for lbl in s.final_composition}
        assert ratio_labels  # the 600-step run covers tasks 0 and 1
        for label in ratio_labels:
            ratios = [s.final_composition.get(label, (0, 0.0))[1] for s in summaries]
            assert float(rows[("final_ratio", label)]["mean"]) == pytest.approx(
                float(np.mean(ratios)), rel=1e-12)

    def test_identical_seed_lists_identical_aggregates(self, tmp_path):
        cfg = desk_config(tmp_path, learner__policy="random",
                          harness__total_steps=400, harness__eval_interval=400,
                          harness__snapshot_steps=[400])
        run_matrix(cfg, [5, 6], out_dir=str(tmp_path / "m1"))
        run_matrix(cfg, [5, 6], out_dir=str(tmp_path / "m2"))
        with open(tmp_path / "m1" / "aggregate.csv", "rb") as fh:
            a = fh.read()
        with open(tmp_path / "m2" / "aggregate.csv", "rb") as fh:
            b = fh.read()
        assert a == b

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValueError):
            run_matrix([], [1])


class TestCli:
    def test_detect_constant_signal_prints_nothing(self, tmp_path, capsys):
        path = tmp_path / "signal.csv"
        path.write_text("\n".join(["2.0"] * 3000) + "\n")
        code = cli_main(["detect", "--input", str(path), "--n", "100", "--k", "100",
                         "--mf", "1.5"])
        assert code == 0
        assert capsys.readouterr().out == ""

    def test_detect_fig2_stream_prints_three_indices(self, tmp_path, capsys):
        path = tmp_path / "signal.csv"
        values = fig2_style_stream(seed=1)
        path.write_text("\n".join(repr(float(v)) for v in values) + "\n")
        code = cli_main(["detect", "--input", str(path), "--n", "600", "--k", "8000",
                         "--mf", "1.5", "--delta", "1e-6"])
        assert code == 0
        printed = [int(line) for line in capsys.readouterr().out.split()]
        assert len(printed) == 3
        for change, index in zip(FIG2_CHANGES, printed):
            assert change < index <= change + 1200

    def test_detect_accepts_curiosity_csv(self, tmp_path, capsys):
        path = tmp_path / "curiosity.csv"
        rows = ["t,c,mu,snr,candidate,boundary"]
        rows += [f"{i},{2.0},0,0,0,0" for i in range(3000)]
        path.write_text("\n".join(rows) + "\n")
        assert cli_main(["detect", "--input", str(path), "--n", "50", "--k", "10",
                         "--mf", "1.5"]) == 0
        assert capsys.readouterr().out == ""

    def test_run_with_invalid_config_fails(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("[buffer]\nfifo_fraction = 1.2\n")
        code = cli_main(["run", "--config", str(bad)])
        assert code == 1
        assert "fifo_fraction" in capsys.readouterr().err

    def test_run_and_analyze_round_trip(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.toml"
        cfg_path.write_text(DESK_DOC.replace('policy = "sac"', 'policy = "random"')
                            .replace("total_steps = 1500", "total_steps = 600")
                            .replace("snapshot_steps = [750, 1500]", "snapshot_steps = [600]")
                            .replace("eval_interval = 750", "eval_interval = 600"))
        out_dir = tmp_path / "out"
        assert cli_main(["run", "--config", str(cfg_path), "--out", str(out_dir)]) == 0
        capsys.readouterr()
        assert cli_main(["analyze", "--run", str(out_dir)]) == 0
        printed = capsys.readouterr().out
        assert "final composition" in printed
        assert "hrb" in printed

    def test_missing_input_file(self, capsys):
        code = cli_main(["detect", "--input", "/nonexistent.csv", "--n", "10",
                         "--k", "10", "--mf", "1.5"])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_flag_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli_main(["detect", "--nope", "1"])
        assert exc.value.code == 2

    def test_analyze_missing_run_dir(self, capsys):
        assert cli_main(["analyze", "--run", "/no/such/dir"]) == 1
