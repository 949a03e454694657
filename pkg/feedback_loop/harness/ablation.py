from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from feedback_loop.harness.config import ExperimentConfig, with_updates
from feedback_loop.harness.runner import per_replica_means, run_replicas, summary_row
from feedback_loop.metrics import recovery_time
from feedback_loop.tools.logging import setup_logger
from feedback_loop.tools.pretty_print import print_dict_as_table_transposed
from feedback_loop.tools.serialization import write_csv

logger = setup_logger()

ABLATIONS: Dict[str, Tuple[str, Any]] = {
    "no-gate": ("gate.mode", "always"),
    "fixed-lr": ("optimizer.beta", 0.0),
    "no-momentum": ("optimizer.gamma", 0.0),
    "no-prioritization": ("gate.mode", "interval"),
}
"""Every ablation changes exactly one key of the base configuration:
    - no-gate: request explicit feedback at every step
    - fixed-lr: learning rate stays at alpha0
    - no-momentum: the raw gradient replaces its moving average
    - no-prioritization: request whenever the interval allows, ignoring uncertainty and engagement
"""

ABLATION_COLUMNS = (
    "variant",
    "mean_satisfaction",
    "final_regret",
    "regret_slope",
    "request_rate",
    "compliance_rate",
    "recovery_steps",
    "satisfaction_std",
)
"""Column order of `ablation.csv`
"""

RECOVERY_WINDOW: int = 250


def apply_ablation(config: ExperimentConfig, ablation: str) -> ExperimentConfig:
    """Copy of `config` with the single change of `ablation`."""
    if ablation not in ABLATIONS:
        raise ValueError(f"`ablation` must be one of {sorted(ABLATIONS)}, got `{ablation}`.")
    key, value = ABLATIONS[ablation]
    return with_updates(config, {key: value})


def mean_recovery_steps(frame: pd.DataFrame, change_point: int, window: int = RECOVERY_WINDOW) -> float:
    """Mean over replicas of the steps the expected satisfaction needs to close 90% of the gap
    between its post-change shock level and its pre-change plateau. Replicas that never recover
    count as the remaining horizon.
    """
    times: List[float] = []
    for _, replica in frame.groupby("replica", sort=True):
        series = replica["expected_satisfaction"].to_numpy()
        recovered: Optional[int] = recovery_time(series, change_point, window, floor=None)
        times.append(recovered if recovered is not None else len(series) - change_point)
    return float(np.mean(times))


@dataclass
class AblationResult:
    table: pd.DataFrame
    deltas: Dict[str, float]
    """Ablated minus base, per metric
    """


def _variant_row(variant: str, config: ExperimentConfig, frame: pd.DataFrame) -> Dict[str, object]:
    row = summary_row(config.agent.kind, frame)
    row["variant"] = variant
    change_points = [cp for cp in config.env.change_points if cp < config.steps]
    window = min(RECOVERY_WINDOW, change_points[0], config.steps - change_points[0]) if change_points else 0
    row["recovery_steps"] = mean_recovery_steps(frame, change_points[0], window) if window > 0 else float("nan")
    row["satisfaction_std"] = float(per_replica_means(frame).std(ddof=0))
    return {column: row[column] for column in ABLATION_COLUMNS}


def run_ablation(config: ExperimentConfig, ablation: str) -> AblationResult:
    """Run the base configuration and its ablated variant on the same seeds, write `ablation.csv`
    to `config.output` and report the ablated minus base deltas. Recovery is measured at the first
    change point before the horizon, if any.
    """
    ablated = apply_ablation(config, ablation)
    rows = [
        _variant_row("base", config, run_replicas(config, desc="base")),
        _variant_row(ablation, ablated, run_replicas(ablated, desc=ablation)),
    ]
    table = pd.DataFrame(rows, columns=list(ABLATION_COLUMNS))

    base, variant = rows
    deltas = {column: float(variant[column]) - float(base[column]) for column in ABLATION_COLUMNS[1:]}
    key, value = ABLATIONS[ablation]
    logger.info(f"Ablation `{ablation}` sets `{key}` to {value}. Deltas against base:")
    print_dict_as_table_transposed(deltas, key_col="Metric", value_col="Ablated - Base")

    write_csv(table, config.output_dir / "ablation.csv")
    return AblationResult(table=table, deltas=deltas)
