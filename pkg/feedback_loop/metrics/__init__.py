from feedback_loop.metrics.ranking import ndcg_at_k, precision_at_k, relevant_set
from feedback_loop.metrics.rates import (
    fit_power_law_exponent,
    linear_fit_r2,
    log_spaced_steps,
    recovery_time,
    regret_slope,
    suboptimality_series,
)
from feedback_loop.metrics.regret import RegretLedger, instantaneous_regret
from feedback_loop.metrics.summary import merge_summaries, sign_test, summarize, summarize_frame

__all__ = [
    "RegretLedger",
    "fit_power_law_exponent",
    "instantaneous_regret",
    "linear_fit_r2",
    "log_spaced_steps",
    "merge_summaries",
    "ndcg_at_k",
    "precision_at_k",
    "recovery_time",
    "regret_slope",
    "relevant_set",
    "sign_test",
    "suboptimality_series",
    "summarize",
    "summarize_frame",
]
