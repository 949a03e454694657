from typing import NamedTuple, Tuple

STEP_COLUMNS: Tuple[str, ...] = (
    "replica",
    "step",
    "action",
    "satisfaction",
    "expected_satisfaction",
    "regret_inst",
    "regret_cum",
    "requested",
    "complied",
    "entropy",
    "lr",
)
"""Exact column order of the per-step CSV.
"""
SUMMARY_COLUMNS: Tuple[str, ...] = (
    "agent",
    "seeds",
    "mean_satisfaction",
    "final_regret",
    "regret_slope",
    "request_rate",
    "compliance_rate",
)
"""Exact column order of the summary CSV.
"""
EXTENDED_COLUMNS: Tuple[str, ...] = (
    "agent",
    "seeds",
    "mean_expected_satisfaction",
    "satisfaction_std",
    "mean_engagement",
    "mean_entropy",
    "precision_at_k",
    "ndcg_at_k",
)
"""Column order of the extended summary CSV.
"""


class MetricsRecord(NamedTuple):
    """Everything the harness records about one step of one replica."""

    replica: int
    step: int
    action: int
    satisfaction: float
    """Realized feedback: explicit when obtained, otherwise implicit
    """
    expected_satisfaction: float
    """Oracle expectation of satisfaction under the agent's action distribution
    """
    regret_inst: float
    regret_cum: float
    requested: bool
    complied: bool
    entropy: float
    lr: float
    engagement: float = 0.0
    precision_at_k: float = 0.0
    ndcg_at_k: float = 0.0


class SummaryStats(NamedTuple):
    """Aggregates over a stream of MetricsRecords."""

    steps: int
    mean_satisfaction: float
    mean_expected_satisfaction: float
    request_rate: float
    compliance_rate: float
    """Fraction of requests that were complied with, 1.0 when nothing was requested
    """
    final_regret: float
    mean_entropy: float
    mean_lr: float
    mean_engagement: float
    precision_at_k: float
    ndcg_at_k: float
