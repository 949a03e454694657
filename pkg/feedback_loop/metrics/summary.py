from typing import Iterable, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import binomtest

from feedback_loop.core.types.metrics import MetricsRecord, SummaryStats


def summarize(records: Sequence[MetricsRecord]) -> SummaryStats:
    """Aggregate one stream of records. Compliance is 1.0 when nothing was requested."""
    if not records:
        raise ValueError("Cannot summarize an empty record stream.")
    return summarize_frame(pd.DataFrame.from_records(records, columns=MetricsRecord._fields))


def summarize_frame(frame: pd.DataFrame) -> SummaryStats:
    """Same as `summarize` for records already in a DataFrame (one row per step). The final
    regret is the mean over replicas of each replica's last cumulative regret.
    """
    if frame.empty:
        raise ValueError("Cannot summarize an empty record stream.")
    num_requests = int(frame["requested"].sum())
    if "replica" in frame:
        final_regret = frame.groupby("replica", sort=True)["regret_cum"].last().mean()
    else:
        final_regret = frame["regret_cum"].iloc[-1]
    return SummaryStats(
        steps=len(frame),
        mean_satisfaction=float(frame["satisfaction"].mean()),
        mean_expected_satisfaction=float(frame["expected_satisfaction"].mean()),
        request_rate=num_requests / len(frame),
        compliance_rate=float(frame["complied"].sum()) / num_requests if num_requests else 1.0,
        final_regret=float(final_regret),
        mean_entropy=float(frame["entropy"].mean()),
        mean_lr=float(frame["lr"].mean()),
        mean_engagement=float(frame["engagement"].mean()) if "engagement" in frame else 0.0,
        precision_at_k=float(frame["precision_at_k"].mean()) if "precision_at_k" in frame else 0.0,
        ndcg_at_k=float(frame["ndcg_at_k"].mean()) if "ndcg_at_k" in frame else 0.0,
    )


def merge_summaries(summaries: Iterable[SummaryStats]) -> SummaryStats:
    """Pool summaries of independent replicas. Per-step means are weighted by steps, compliance
    by requests, and the final regret is averaged per replica, so the result does not depend on
    the order of `summaries`.
    """
    summaries = list(summaries)
    if not summaries:
        raise ValueError("Nothing to merge.")

    steps = np.array([s.steps for s in summaries], dtype=float)
    requests = np.array([s.request_rate for s in summaries]) * steps
    complied = np.array([s.compliance_rate for s in summaries]) * requests

    def weighted(field: str) -> float:
        return float(np.dot(steps, [getattr(s, field) for s in summaries]) / steps.sum())

    return SummaryStats(
        steps=int(steps.sum()),
        mean_satisfaction=weighted("mean_satisfaction"),
        mean_expected_satisfaction=weighted("mean_expected_satisfaction"),
        request_rate=float(requests.sum() / steps.sum()),
        compliance_rate=float(complied.sum() / requests.sum()) if requests.sum() > 0 else 1.0,
        final_regret=float(np.mean([s.final_regret for s in summaries])),
        mean_entropy=weighted("mean_entropy"),
        mean_lr=weighted("mean_lr"),
        mean_engagement=weighted("mean_engagement"),
        precision_at_k=weighted("precision_at_k"),
        ndcg_at_k=weighted("ndcg_at_k"),
    )


def sign_test(a: Sequence[float], b: Sequence[float]) -> Tuple[int, int, int, float]:
    """One-sided paired sign test of `a > b`. Ties are dropped; the p-value is 1.0 when every
    pair is tied.

    Returns:
        Tuple of (pairs where a wins, pairs where b wins, ties, p-value).
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"`a` and `b` must be paired, got shapes {a.shape} and {b.shape}.")
    diff = a - b
    n_better, n_worse = int((diff > 0).sum()), int((diff < 0).sum())
    n_ties = len(diff) - n_better - n_worse
    if n_better + n_worse == 0:
        return n_better, n_worse, n_ties, 1.0
    p_value = binomtest(n_better, n_better + n_worse, p=0.5, alternative="greater").pvalue
    return n_better, n_worse, n_ties, float(p_value)
