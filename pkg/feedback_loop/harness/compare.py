from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence

import pandas as pd

from feedback_loop.baselines.registry import AgentKind
from feedback_loop.core.types.metrics import EXTENDED_COLUMNS, STEP_COLUMNS, SUMMARY_COLUMNS
from feedback_loop.harness.config import ExperimentConfig, with_updates
from feedback_loop.harness.runner import extended_row, per_replica_means, run_replicas, summary_row
from feedback_loop.metrics import sign_test
from feedback_loop.tools.logging import setup_logger
from feedback_loop.tools.serialization import write_csv

logger = setup_logger()

SIGN_TEST_COLUMNS = ("baseline", "n_better", "n_worse", "n_ties", "mean_diff", "p_value")
"""Column order of `sign_tests.csv`
"""


@dataclass
class ComparisonResult:
    summary: pd.DataFrame
    extended: pd.DataFrame
    sign_tests: pd.DataFrame
    """Paired comparison of the reference agent against every other agent
    """
    reference: str
    paths: Dict[str, Path] = field(default_factory=dict)


def compare_agents(
    config: ExperimentConfig,
    agents: Sequence[str],
    with_oracle: bool = False,
    save_steps: bool = False,
) -> ComparisonResult:
    """Run every agent of `agents` on the same seed-matched replicas of `config` and compare their
    mean satisfaction seed by seed.

    The reference of the paired sign tests is the adaptive engine when it is among `agents`, the
    first agent otherwise. Writes `summary.csv`, `extended_summary.csv` and `sign_tests.csv` to
    `config.output`, plus `steps_<agent>.csv` per agent when `save_steps` is set.
    """
    agents = list(dict.fromkeys(agents))
    if with_oracle and AgentKind.ORACLE.value not in agents:
        agents.append(AgentKind.ORACLE.value)
    if not agents:
        raise ValueError("`agents` must name at least one agent.")
    config.validate()

    out_dir = config.output_dir
    summary_rows: List[Dict[str, object]] = []
    extended_rows: List[Dict[str, object]] = []
    satisfaction: Dict[str, pd.Series] = {}
    paths: Dict[str, Path] = {}

    for agent in agents:
        agent_config = with_updates(config, {"agent.kind": agent})
        frame = run_replicas(agent_config, desc=agent)
        summary_rows.append(summary_row(agent, frame))
        extended_rows.append(extended_row(agent, frame))
        satisfaction[agent] = per_replica_means(frame)
        if save_steps:
            paths[f"steps_{agent}"] = write_csv(frame[list(STEP_COLUMNS)], out_dir / f"steps_{agent}.csv")

    reference = AgentKind.DP.value if AgentKind.DP.value in agents else agents[0]
    test_rows = []
    for baseline in agents:
        if baseline == reference:
            continue
        n_better, n_worse, n_ties, p_value = sign_test(satisfaction[reference], satisfaction[baseline])
        mean_diff = float((satisfaction[reference] - satisfaction[baseline]).mean())
        test_rows.append(dict(zip(SIGN_TEST_COLUMNS, (baseline, n_better, n_worse, n_ties, mean_diff, p_value))))
        logger.info(
            f"`{reference}` vs `{baseline}`: better on {n_better}, worse on {n_worse}, tied on {n_ties} seeds "
            f"(mean diff {mean_diff:+.4f}, one-sided p={p_value:.3g})."
        )

    result = ComparisonResult(
        summary=pd.DataFrame(summary_rows, columns=list(SUMMARY_COLUMNS)),
        extended=pd.DataFrame(extended_rows, columns=list(EXTENDED_COLUMNS)),
        sign_tests=pd.DataFrame(test_rows, columns=list(SIGN_TEST_COLUMNS)),
        reference=reference,
        paths=paths,
    )
    paths["summary"] = write_csv(result.summary, out_dir / "summary.csv")
    paths["extended_summary"] = write_csv(result.extended, out_dir / "extended_summary.csv")
    paths["sign_tests"] = write_csv(result.sign_tests, out_dir / "sign_tests.csv")
    return result
