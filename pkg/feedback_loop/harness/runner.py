from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from feedback_loop.baselines.registry import build_agent
from feedback_loop.core.agent import PersonalizationAgent
from feedback_loop.core.types.metrics import EXTENDED_COLUMNS, STEP_COLUMNS, SUMMARY_COLUMNS, MetricsRecord
from feedback_loop.environments.simulator import UserSimulator
from feedback_loop.harness.config import ExperimentConfig
from feedback_loop.harness.delay import DelayQueue
from feedback_loop.metrics import (
    RegretLedger,
    ndcg_at_k,
    precision_at_k,
    regret_slope,
    relevant_set,
    summarize_frame,
)
from feedback_loop.policy import entropy, expected_value
from feedback_loop.tools.logging import setup_logger
from feedback_loop.tools.serialization import write_csv
from feedback_loop.tools.timers import LatencyMeter, timer

logger = setup_logger()


def replica_rngs(base_seed: int, replica: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent environment and agent generators for one replica, both derived from
    `base_seed + replica`. Whatever the agent draws, the environment stream is unchanged.
    """
    env_seq, agent_seq = np.random.SeedSequence(base_seed + replica).spawn(2)
    return np.random.default_rng(env_seq), np.random.default_rng(agent_seq)


def make_replica(config: ExperimentConfig, replica: int) -> Tuple[UserSimulator, PersonalizationAgent]:
    """Seed-matched simulator and agent of one replica."""
    env_rng, agent_rng = replica_rngs(config.seed, replica)
    env = UserSimulator(config.env, rng=env_rng)
    agent = build_agent(
        config.agent,
        env.num_actions,
        env.ctx_dim,
        agent_rng,
        optimizer=config.optimizer,
        gate=config.gate,
        privacy=config.resolved_privacy,
        oracle=env.oracle_all,
    )
    return env, agent


def run_replica(config: ExperimentConfig, replica: int) -> pd.DataFrame:
    """Run one replica for `config.steps` steps and return its per-step records.

    Each step observes the user, lets the agent select, plays the action, enqueues the feedback
    and ingests whatever is due at this step. Feedback still queued at the horizon is ingested
    afterwards in due order.
    """
    env, agent = make_replica(config, replica)
    queue = DelayQueue(config.delay)
    ledger = RegretLedger()
    update_latency = LatencyMeter()
    k = config.k

    records: List[MetricsRecord] = []
    for t in range(config.steps):
        obs = env.observe()
        oracle_values = env.oracle_all(obs.ctx)

        action, requested = agent.select(obs)
        dist = agent.last_distribution
        assert dist is not None
        regret = ledger.record(oracle_values, dist)
        ranked = agent.ranking(obs.ctx, k)

        event = env.act(obs.ctx, action, requested)
        queue.push(event)
        for due_event in queue.pop_due(t):
            with update_latency.measure():
                agent.ingest(due_event)

        records.append(
            MetricsRecord(
                replica=replica,
                step=t,
                action=action,
                satisfaction=event.value,
                expected_satisfaction=expected_value(dist, oracle_values),
                regret_inst=regret,
                regret_cum=ledger.total,
                requested=event.requested,
                complied=event.complied,
                entropy=entropy(dist),
                lr=agent.learning_rate,
                engagement=obs.engagement,
                precision_at_k=precision_at_k(ranked, relevant_set(oracle_values, k), k),
                ndcg_at_k=ndcg_at_k(ranked, oracle_values, k),
            )
        )

    for late_event in queue.drain():
        agent.ingest(late_event)

    logger.info(
        f"Replica {replica} of `{agent.name}` done: final regret {ledger.total:.2f}, "
        f"mean update latency {update_latency.mean_ms:.3f}ms."
    )
    frame = pd.DataFrame.from_records(records, columns=MetricsRecord._fields)
    return frame.astype({"requested": int, "complied": int})


def run_replicas(config: ExperimentConfig, desc: Optional[str] = None) -> pd.DataFrame:
    """Run every replica of `config`, in parallel when `n_jobs != 1`, and concatenate the records
    sorted by replica and step.
    """
    frames = Parallel(n_jobs=config.n_jobs)(
        delayed(run_replica)(config, replica)
        for replica in tqdm(range(config.replicas), desc=desc or config.agent.kind, disable=config.replicas == 1)
    )
    return pd.concat(frames, ignore_index=True).sort_values(["replica", "step"], ignore_index=True)


def per_replica_means(frame: pd.DataFrame, column: str = "satisfaction") -> pd.Series:
    """Mean of `column` for every replica, indexed by replica."""
    return frame.groupby("replica", sort=True)[column].mean()


def summary_row(agent: str, frame: pd.DataFrame) -> Dict[str, object]:
    """One row of the summary CSV. Rates are pooled over all replicas; the regret slope is fitted
    on the replica-mean cumulative regret curve.
    """
    stats = summarize_frame(frame)
    mean_regret_curve = frame.groupby("step", sort=True)["regret_cum"].mean().to_numpy()
    row = dict(
        agent=agent,
        seeds=frame["replica"].nunique(),
        mean_satisfaction=stats.mean_satisfaction,
        final_regret=stats.final_regret,
        regret_slope=regret_slope(mean_regret_curve),
        request_rate=stats.request_rate,
        compliance_rate=stats.compliance_rate,
    )
    return {column: row[column] for column in SUMMARY_COLUMNS}


def extended_row(agent: str, frame: pd.DataFrame) -> Dict[str, object]:
    """One row of the extended summary CSV. `satisfaction_std` is the spread of the per-replica
    mean satisfaction.
    """
    stats = summarize_frame(frame)
    replica_means = per_replica_means(frame)
    row = dict(
        agent=agent,
        seeds=len(replica_means),
        mean_expected_satisfaction=stats.mean_expected_satisfaction,
        satisfaction_std=float(replica_means.std(ddof=0)),
        mean_engagement=stats.mean_engagement,
        mean_entropy=stats.mean_entropy,
        precision_at_k=stats.precision_at_k,
        ndcg_at_k=stats.ndcg_at_k,
    )
    return {column: row[column] for column in EXTENDED_COLUMNS}


@dataclass
class ExperimentResult:
    steps: pd.DataFrame
    """Per-step records of every replica
    """
    summary: pd.DataFrame
    extended: pd.DataFrame
    paths: Dict[str, Path] = field(default_factory=dict)
    """Written CSV files keyed by table name
    """


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run all replicas of the configured agent and write `steps.csv`, `summary.csv` and
    `extended_summary.csv` to `config.output`.
    """
    config.validate()
    out_dir = config.output_dir
    agent = config.agent.kind
    logger.info(
        f"Running `{agent}` on `{config.env.kind}` for {config.steps} steps x {config.replicas} replicas "
        f"(seed {config.seed}, delay {config.delay})."
    )

    with timer(logger=logger, name="Experiment"):
        frame = run_replicas(config)

    result = ExperimentResult(
        steps=frame,
        summary=pd.DataFrame([summary_row(agent, frame)], columns=list(SUMMARY_COLUMNS)),
        extended=pd.DataFrame([extended_row(agent, frame)], columns=list(EXTENDED_COLUMNS)),
    )
    result.paths["steps"] = write_csv(frame[list(STEP_COLUMNS)], out_dir / "steps.csv")
    result.paths["summary"] = write_csv(result.summary, out_dir / "summary.csv")
    result.paths["extended_summary"] = write_csv(result.extended, out_dir / "extended_summary.csv")
    return result
