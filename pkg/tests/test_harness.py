from dataclasses import asdict, replace

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from feedback_loop.core.exceptions import ConfigurationError
from feedback_loop.core.types.feedback import FeedbackEvent
from feedback_loop.core.types.metrics import EXTENDED_COLUMNS, STEP_COLUMNS, SUMMARY_COLUMNS
from feedback_loop.engine.privacy import noise_scale
from feedback_loop.harness import (
    ABLATIONS,
    PRESETS,
    DelayQueue,
    apply_ablation,
    build_config,
    compare_agents,
    run_ablation,
    run_experiment,
    run_replica,
    run_replicas,
    with_updates,
)
from feedback_loop.harness.ablation import mean_recovery_steps
from feedback_loop.harness.bench import run_complexity_bench
from feedback_loop.harness.cli import main
from feedback_loop.harness.compare import SIGN_TEST_COLUMNS
from feedback_loop.harness.runner import make_replica, per_replica_means


def _flatten(d, prefix=""):
    for key, value in d.items():
        if isinstance(value, dict):
            yield from _flatten(value, f"{prefix}{key}.")
        else:
            yield f"{prefix}{key}", value


class TestDelayQueue:
    def test_zero_delay(self):
        queue = DelayQueue(0)
        queue.push(FeedbackEvent(step=4, implicit=0.5))
        assert [e.step for e in queue.pop_due(4)] == [4]
        assert len(queue) == 0

    def test_exact_delay_and_conservation(self, rng):
        queue, delivered = DelayQueue(3), []
        for t in range(50):
            queue.push(FeedbackEvent(step=t, implicit=float(rng.random())))
            delivered.extend((t, event.step) for event in queue.pop_due(t))
        assert all(t - step == 3 for t, step in delivered)
        late = list(queue.drain())
        assert [e.step for e in late] == [47, 48, 49]
        assert sorted([step for _, step in delivered] + [e.step for e in late]) == list(range(50))
        assert len(queue) == 0

    def test_fifo_within_a_step(self):
        queue = DelayQueue(2)
        first, second = FeedbackEvent(step=1, implicit=0.1), FeedbackEvent(step=1, implicit=0.2)
        queue.push(first)
        queue.push(second)
        assert queue.pop_due(2) == []
        assert queue.pop_due(3) == [first, second]

    def test_negative_delay(self):
        with pytest.raises(ValueError, match="`delay`"):
            DelayQueue(-1)


class TestConfig:
    def test_defaults(self):
        config = build_config()
        assert (config.steps, config.replicas, config.delay, config.agent.kind) == (50_000, 20, 0, "dp")
        assert config.privacy.horizon is None
        assert config.resolved_privacy.horizon == config.steps

    def test_privacy_horizon_follows_steps(self):
        config = with_updates(build_config(), {"privacy.enabled": True})
        shorter = with_updates(config, {"steps": 2_000})
        assert shorter.resolved_privacy.horizon == 2_000
        _, agent = make_replica(shorter, 0)
        assert agent.noise_sigma == pytest.approx(noise_scale(replace(shorter.privacy, horizon=2_000)))

    def test_explicit_privacy_horizon_kept(self):
        config = with_updates(build_config(), {"privacy.horizon": 500, "steps": 2_000})
        assert config.resolved_privacy.horizon == 500

    def test_env_seed_rejected(self):
        with pytest.raises(ConfigurationError) as exc_info:
            build_config(overrides={"env.seed": 3})
        assert exc_info.value.key == "env.seed"

    @pytest.mark.parametrize("preset", ["stationary", "drift", "changepoint", "fatigue-stress"])
    def test_presets(self, preset):
        assert preset in PRESETS
        config = build_config(preset=preset)
        assert config.optimizer.baseline_horizon == 1_000
        assert (config.env.resolved_num_actions, config.env.ctx_dim) == (16, 16)

    def test_changepoint_preset(self):
        assert build_config(preset="changepoint").env.change_points == [25_000]

    def test_dotted_file_and_precedence(self, tmp_path):
        path = tmp_path / "experiment.cfg"
        path.write_text(
            "# tuned run\n"
            "optimizer.alpha0 = 0.05\n"
            "\n"
            "env.change_points = [100, 200]\n"
            "steps = 1000\n",
            encoding="utf-8",
        )
        config = build_config(preset="drift", config_path=path, overrides={"steps": 500, "seed": None})
        assert config.optimizer.alpha0 == 0.05
        assert config.env.change_points == [100, 200]
        assert config.env.drift_rate == 0.002
        assert config.steps == 500
        assert config.seed == 0

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("optimizer.alpha = 0.05\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="optimizer.alpha"):
            build_config(config_path=path)

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("steps 100\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="Malformed line 1"):
            build_config(config_path=path)

    @pytest.mark.parametrize(
        "key, value", [("steps", 0), ("replicas", 0), ("delay", -2), ("gate.tau_e", 2.0), ("env.fatigue.window", 0)]
    )
    def test_invalid_values_name_the_key(self, key, value):
        with pytest.raises(ConfigurationError) as exc_info:
            build_config(overrides={key: value})
        assert exc_info.value.key == key

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationError, match="preset"):
            build_config(preset="weekend")

    def test_with_updates_copies(self, small_config):
        updated = with_updates(small_config, {"agent.kind": "sp"})
        assert (updated.agent.kind, small_config.agent.kind) == ("sp", "dp")


class TestRunner:
    def test_replica_records(self, small_config):
        frame = run_replica(small_config, 0)
        assert len(frame) == small_config.steps
        assert (frame["regret_inst"] >= 0).all()
        assert frame["regret_cum"].is_monotonic_increasing
        assert (frame["requested"] >= frame["complied"]).all()
        assert frame[["precision_at_k", "ndcg_at_k"]].stack().between(0, 1).all()

    def test_agents_face_the_same_environment(self, small_config):
        contexts = []
        for kind in ("dp", "sp"):
            env, _ = make_replica(with_updates(small_config, {"agent.kind": kind}), 1)
            contexts.append(np.stack([env.observe().ctx for _ in range(10)]))
        np.testing.assert_array_equal(*contexts)

    def test_byte_identical_outputs(self, small_config, tmp_path):
        outputs = []
        for name in ("first", "second"):
            config = with_updates(small_config, {"output": str(tmp_path / name)})
            run_experiment(config)
            outputs.append({f: (tmp_path / name / f).read_bytes() for f in ("steps.csv", "summary.csv")})
        assert outputs[0] == outputs[1]

    def test_csv_columns(self, small_config):
        result = run_experiment(small_config)
        assert tuple(pd.read_csv(result.paths["steps"]).columns) == STEP_COLUMNS
        assert tuple(pd.read_csv(result.paths["summary"]).columns) == SUMMARY_COLUMNS
        assert tuple(pd.read_csv(result.paths["extended_summary"]).columns) == EXTENDED_COLUMNS
        steps = pd.read_csv(result.paths["steps"])
        assert sorted(steps["replica"].unique()) == [0, 1]
        assert result.summary.loc[0, "seeds"] == 2

    def test_parallel_matches_sequential(self, small_config):
        sequential = run_replicas(small_config)
        parallel = run_replicas(with_updates(small_config, {"n_jobs": 2}))
        pd.testing.assert_frame_equal(sequential, parallel)

    def test_delay_changes_the_run_but_keeps_all_steps(self, small_config):
        frame = run_replica(with_updates(small_config, {"delay": 20}), 0)
        baseline = run_replica(small_config, 0)
        assert len(frame) == len(baseline)
        assert frame["action"].iloc[0] == baseline["action"].iloc[0]
        # the learning rate cannot move before the first delayed event arrives
        assert frame["lr"].iloc[:20].nunique() == 1


class TestCompare:
    def test_oracle_has_zero_regret(self, small_config):
        result = compare_agents(small_config, ["dp", "sp"], with_oracle=True)
        summary = result.summary.set_index("agent")
        assert list(summary.index) == ["dp", "sp", "oracle"]
        assert summary.loc["oracle", "final_regret"] == 0.0
        assert tuple(result.sign_tests.columns) == SIGN_TEST_COLUMNS
        assert list(result.sign_tests["baseline"]) == ["sp", "oracle"]
        for name in ("summary", "extended_summary", "sign_tests"):
            assert result.paths[name].is_file()

    def test_self_comparison_has_no_differences(self, small_config):
        a = per_replica_means(run_replicas(small_config))
        b = per_replica_means(run_replicas(small_config))
        assert ((a - b) == 0).all()

    def test_save_steps(self, small_config):
        result = compare_agents(small_config, ["sol"], save_steps=True)
        assert result.paths["steps_sol"].is_file()
        assert result.reference == "sol"
        assert result.sign_tests.empty


class TestAblation:
    @pytest.mark.parametrize("ablation", sorted(ABLATIONS))
    def test_single_field_change(self, small_config, ablation):
        base = dict(_flatten(asdict(small_config)))
        ablated = dict(_flatten(asdict(apply_ablation(small_config, ablation))))
        assert [key for key in base if base[key] != ablated[key]] == [ABLATIONS[ablation][0]]

    def test_no_gate_requests_every_step(self, small_config):
        result = run_ablation(small_config, "no-gate")
        table = result.table.set_index("variant")
        assert table.loc["no-gate", "request_rate"] == 1.0
        assert result.deltas["request_rate"] > 0
        assert (small_config.output_dir / "ablation.csv").is_file()

    def test_recovery_reported_with_change_point(self, small_config):
        config = with_updates(small_config, {"env.change_points": [150]})
        table = run_ablation(config, "fixed-lr").table
        assert table["recovery_steps"].between(0, 150).all()

    def test_mean_recovery_from_shock_level(self):
        plateau, dip = np.full(100, 0.55), np.full(20, 0.5)
        recovering = np.r_[plateau, dip, np.linspace(0.5, 0.55, 101)[1:]]
        stuck = np.r_[plateau, np.full(120, 0.5)]
        frame = pd.DataFrame(
            {
                "replica": np.repeat([0, 1], len(recovering)),
                "expected_satisfaction": np.r_[recovering, stuck],
            }
        )
        # 115 steps for the first replica, the remaining 120 steps for the one that stays at the shock
        assert mean_recovery_steps(frame, change_point=100, window=10) == pytest.approx(117.5)

    def test_unknown_ablation(self, small_config):
        with pytest.raises(ValueError, match="`ablation`"):
            apply_ablation(small_config, "no-privacy")


class TestCli:
    def test_run(self, tmp_path):
        out = tmp_path / "run"
        result = CliRunner().invoke(
            main, ["run", "--steps", "60", "--replicas", "1", "--seed", "3", "--delay", "2", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert {p.name for p in out.iterdir()} == {"steps.csv", "summary.csv", "extended_summary.csv"}

    def test_run_with_config_and_preset(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("replicas = 1\nenv.num_actions = 4\n", encoding="utf-8")
        out = tmp_path / "run"
        args = ["run", "-p", "fatigue-stress", "-c", str(cfg), "-t", "40", "-o", str(out), "-a", "cas"]
        result = CliRunner().invoke(main, args)
        assert result.exit_code == 0, result.output
        assert pd.read_csv(out / "summary.csv").loc[0, "agent"] == "cas"

    def test_bad_key_is_reported(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("gate.tau_x = 0.3\n", encoding="utf-8")
        result = CliRunner().invoke(main, ["run", "--config", str(cfg), "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "gate.tau_x" in result.output

    def test_bad_value_is_reported(self, tmp_path):
        result = CliRunner().invoke(main, ["run", "--steps", "0", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "steps" in result.output

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        result = CliRunner().invoke(main, ["run", "-t", "20", "-r", "1", "-o", str(blocker / "out")])
        assert result.exit_code == 1
        assert "Cannot write results" in result.output

    def test_compare(self, tmp_path):
        args = ["compare", "-a", "dp,sol", "--with-oracle", "-t", "50", "-r", "2", "-o", str(tmp_path)]
        result = CliRunner().invoke(main, args)
        assert result.exit_code == 0, result.output
        assert list(pd.read_csv(tmp_path / "summary.csv")["agent"]) == ["dp", "sol", "oracle"]

    def test_compare_rejects_unknown_agent(self, tmp_path):
        result = CliRunner().invoke(main, ["compare", "-a", "dp,xyz", "-o", str(tmp_path)])
        assert result.exit_code == 2
        assert "xyz" in result.output

    def test_ablate(self, tmp_path):
        args = ["ablate", "-x", "no-momentum", "-t", "50", "-r", "2", "-o", str(tmp_path)]
        result = CliRunner().invoke(main, args)
        assert result.exit_code == 0, result.output
        assert list(pd.read_csv(tmp_path / "ablation.csv")["variant"]) == ["base", "no-momentum"]


@pytest.mark.slow
def test_update_time_scales_with_problem_size(tmp_path):
    result = run_complexity_bench(tmp_path, num_updates=300)
    assert len(result.table) == 16
    assert result.slope > 0
    assert result.r2 > 0.9
    assert (tmp_path / "complexity.csv").is_file()
