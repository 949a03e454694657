import numpy as np
import pytest

from feedback_loop.baselines import (
    AGENT_KINDS,
    AgentConfig,
    BatchRefitAgent,
    ContextAwareStaticAgent,
    OracleAgent,
    build_agent,
    make_context_aware_static,
    make_periodic,
    make_simple_online,
    make_static_profile,
)
from feedback_loop.core.exceptions import ConfigurationError
from feedback_loop.core.types.feedback import FeedbackEvent, Observation
from feedback_loop.engine import AdaptiveEngine, GateConfig, OptimizerConfig
from feedback_loop.environments import EnvConfig, UserSimulator
from feedback_loop.metrics import instantaneous_regret
from feedback_loop.policy import action_probabilities


def _run_two_arm(agent, env, steps: int, on_step=None) -> None:
    for t in range(steps):
        action, _ = agent.select(Observation(ctx=env.ctx, engagement=1.0))
        agent.ingest(FeedbackEvent(step=t, implicit=env.feedback(action)))
        if on_step is not None:
            on_step(t, agent)


class TestBatchRefit:
    def test_frozen_after_warmup(self, rng, two_arm_env):
        agent = make_static_profile(2, 1, rng, warmup_steps=50, refit_interval=None)
        snapshots = []
        _run_two_arm(agent, two_arm_env, 400, on_step=lambda t, a: snapshots.append(a.params))
        assert agent.refit_steps == [50]
        assert not np.array_equal(snapshots[50], snapshots[49])
        for previous, current in zip(snapshots[50:], snapshots[51:]):
            np.testing.assert_array_equal(previous, current)

    def test_periodic_changes_only_at_multiples(self, rng, two_arm_env):
        agent = make_periodic(2, 1, rng, refit_interval=100)
        snapshots = [agent.params]
        _run_two_arm(agent, two_arm_env, 450, on_step=lambda t, a: snapshots.append(a.params))
        # snapshots[t + 1] holds the weights used at step t
        changed = [t for t in range(1, 450) if not np.array_equal(snapshots[t + 1], snapshots[t])]
        assert changed == [100, 200, 300, 400]
        assert agent.refit_steps == [100, 200, 300, 400]

    def test_static_refits_on_long_cadence(self, rng):
        agent = make_static_profile(2, 1, rng, warmup_steps=10, refit_interval=30)
        assert [t for t in range(100) if agent.is_refit_step(t)] == [10, 40, 70]

    def test_prefers_better_action_after_warmup(self, rng, two_arm_env):
        agent = make_static_profile(2, 1, rng, warmup_steps=500)
        _run_two_arm(agent, two_arm_env, 501)
        assert action_probabilities(agent.params, two_arm_env.ctx)[1] > 0.5

    def test_never_requests(self, rng, two_arm_env):
        agent = make_periodic(2, 1, rng, refit_interval=10)
        assert not any(agent.select(Observation(two_arm_env.ctx, 1.0))[1] for _ in range(50))

    def test_unknown_step(self, rng):
        with pytest.raises(KeyError):
            make_periodic(2, 1, rng).ingest(FeedbackEvent(step=3, implicit=0.5))

    def test_invalid_arguments(self, rng):
        with pytest.raises(ValueError, match="`warmup_steps`"):
            BatchRefitAgent(2, 1, rng, warmup_steps=0, refit_interval=None)


class TestContextAwareStatic:
    def test_cell_count(self, rng):
        assert ContextAwareStaticAgent(3, 4, rng, active_dims=1, buckets_per_dim=2).num_cells == 2
        assert ContextAwareStaticAgent(3, 4, rng, active_dims=2, buckets_per_dim=3).num_cells == 9

    def test_cells_split_on_sign(self, rng):
        agent = ContextAwareStaticAgent(3, 2, rng)
        cells = {agent.cell_index(np.array([x, y])) for x in (-0.5, 0.5) for y in (-0.5, 0.5)}
        assert cells == {0, 1, 2, 3}
        assert agent.cell_index(np.array([1.0, 1.0])) == 3

    def test_cell_means_match_brute_force(self, rng):
        agent = ContextAwareStaticAgent(3, 2, rng, warmup_steps=400)
        log = []
        for t in range(400):
            ctx = rng.uniform(-1, 1, size=2)
            action, _ = agent.select(Observation(ctx, 1.0))
            feedback = float(rng.random())
            agent.ingest(FeedbackEvent(step=t, implicit=feedback))
            log.append((agent.cell_index(ctx), action, feedback))

        for cell in range(agent.num_cells):
            for action in range(3):
                values = [f for c, a, f in log if c == cell and a == action]
                if values:
                    assert agent.cell_means(cell)[action] == pytest.approx(np.mean(values), abs=1e-12)

    def test_unseen_cell_falls_back_to_global_means(self, rng):
        agent = ContextAwareStaticAgent(2, 1, rng, warmup_steps=4, active_dims=1)
        positive = np.array([0.5])
        for t in range(4):
            action, _ = agent.select(Observation(positive, 1.0))
            agent.ingest(FeedbackEvent(step=t, implicit=0.9 if action == 1 else 0.1))
        negative_cell = agent.cell_index(np.array([-0.5]))
        np.testing.assert_allclose(agent.cell_means(negative_cell), agent.global_means)

    def test_greedy_after_warmup(self, rng):
        agent = ContextAwareStaticAgent(2, 1, rng, warmup_steps=200, active_dims=1)
        for t in range(200):
            ctx = np.array([0.5 if t % 2 else -0.5])
            action, _ = agent.select(Observation(ctx, 1.0))
            # action 1 is better for positive contexts, action 0 for negative ones
            good = (action == 1) == (ctx[0] > 0)
            agent.ingest(FeedbackEvent(step=t, implicit=0.9 if good else 0.1))
        np.testing.assert_array_equal(agent.action_distribution(np.array([0.7])), [0.0, 1.0])
        np.testing.assert_array_equal(agent.action_distribution(np.array([-0.7])), [1.0, 0.0])

    def test_ties_pick_lowest_action(self, rng):
        agent = ContextAwareStaticAgent(3, 1, rng, warmup_steps=1, active_dims=1)
        agent.select(Observation(np.array([0.2]), 1.0))
        np.testing.assert_array_equal(agent.action_distribution(np.array([0.2])), [1.0, 0.0, 0.0])

    def test_factory_caps_active_dims(self, rng):
        agent = make_context_aware_static(3, 1, rng, active_dims=4)
        assert agent.active_dims == 1
        assert agent.num_cells == 2


class TestSimpleOnline:
    def test_requests_on_cadence(self, rng, two_arm_env):
        agent = make_simple_online(2, 1, rng, request_every=5)
        requests = []
        for t in range(40):
            action, requested = agent.select(Observation(two_arm_env.ctx, 0.1))
            agent.ingest(FeedbackEvent(step=t, implicit=two_arm_env.feedback(action)))
            if requested:
                requests.append(t)
        assert requests == list(range(0, 40, 5))

    def test_constant_learning_rate(self, rng, two_arm_env):
        agent = make_simple_online(2, 1, rng, fixed_lr=0.05)
        rates = []
        _run_two_arm(agent, two_arm_env, 100, on_step=lambda t, a: rates.append(a.learning_rate))
        assert set(rates) == {0.05}

    def test_matches_configured_engine(self, two_arm_env):
        sol = make_simple_online(2, 1, np.random.default_rng(4), fixed_lr=0.02, request_every=3)
        engine = AdaptiveEngine(
            2,
            1,
            np.random.default_rng(4),
            optimizer=OptimizerConfig(alpha0=0.02, beta=0.0, gamma=0.0, second_moment=False),
            gate=GateConfig(mode="periodic", period=3),
        )
        for t in range(500):
            obs = Observation(two_arm_env.ctx, 1.0)
            (a_sol, r_sol), (a_eng, r_eng) = sol.select(obs), engine.select(obs)
            assert (a_sol, r_sol) == (a_eng, r_eng)
            sol.ingest(FeedbackEvent(step=t, implicit=two_arm_env.feedback(a_sol)))
            engine.ingest(FeedbackEvent(step=t, implicit=two_arm_env.feedback(a_eng)))
            np.testing.assert_array_equal(sol.params, engine.params)


class TestRegistry:
    @pytest.mark.parametrize("kind", AGENT_KINDS)
    def test_builds_every_kind(self, rng, kind):
        env = UserSimulator(EnvConfig(num_actions=5, ctx_dim=3), rng=np.random.default_rng(0))
        agent = build_agent(AgentConfig(kind=kind), 5, 3, rng, oracle=env.oracle_all)
        assert agent.name == kind
        action, _ = agent.select(env.observe())
        assert 0 <= action < 5

    def test_default_refit_intervals(self, rng):
        sp = build_agent(AgentConfig(kind="sp"), 2, 1, rng)
        pu = build_agent(AgentConfig(kind="pu"), 2, 1, rng)
        assert (sp.refit_interval, pu.refit_interval) == (10_000, 1_000)

    def test_zero_refit_interval_freezes_static_profile(self, rng):
        config = AgentConfig(kind="sp", refit_interval=0)
        config.validate()
        assert build_agent(config, 2, 1, rng).refit_interval is None

    def test_zero_refit_interval_rejected_for_periodic(self):
        with pytest.raises(ConfigurationError) as exc_info:
            AgentConfig(kind="pu", refit_interval=0).validate()
        assert exc_info.value.key == "refit_interval"

    def test_oracle_needs_callable(self, rng):
        with pytest.raises(ValueError, match="oracle"):
            build_agent(AgentConfig(kind="oracle"), 2, 1, rng)

    @pytest.mark.parametrize("field, value", [("kind", "bandit"), ("refit_interval", -1), ("request_every", 0)])
    def test_invalid_config(self, field, value):
        with pytest.raises(ConfigurationError) as exc_info:
            AgentConfig(**{field: value}).validate()
        assert exc_info.value.key == field


def test_oracle_agent_has_zero_regret(rng):
    env = UserSimulator(EnvConfig(num_actions=6, ctx_dim=3, drift_rate=0.01), rng=np.random.default_rng(1))
    agent = OracleAgent(6, 3, rng, oracle=env.oracle_all)
    for _ in range(200):
        obs = env.observe()
        action, requested = agent.select(obs)
        assert instantaneous_regret(env.oracle_all(obs.ctx), agent.last_distribution) == 0.0
        agent.ingest(env.act(obs.ctx, action, requested))
