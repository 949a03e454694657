from typing import Iterable, Sequence, Set

import numpy as np

from feedback_loop.core.types.policy import ActionId, FloatArray


def _check_k(k: int) -> None:
    if k <= 0:
        raise ValueError(f"`k` must be > 0, got {k}.")


def relevant_set(gains: FloatArray, k: int) -> Set[ActionId]:
    """The `k` actions with the largest gains, ties broken by ascending id."""
    _check_k(k)
    order = np.argsort(-np.asarray(gains), kind="stable")
    return {int(a) for a in order[:k]}


def precision_at_k(ranked: Sequence[ActionId], relevant: Iterable[ActionId], k: int) -> float:
    """Fraction of the first `k` ranked items that are relevant."""
    _check_k(k)
    return len(set(ranked[:k]) & set(relevant)) / k


def _dcg(gains: FloatArray) -> float:
    discounts = 1.0 / np.log2(np.arange(2, len(gains) + 2))
    return float(np.dot(gains, discounts))


def ndcg_at_k(ranked: Sequence[ActionId], gains: FloatArray, k: int) -> float:
    """Normalised discounted cumulative gain of the first `k` ranked items, with the discount
    `1 / log2(i + 1)` for position `i` starting at 1. All-zero gains score 1.0.
    """
    _check_k(k)
    gains = np.asarray(gains, dtype=float)
    ideal = _dcg(np.sort(gains)[::-1][:k])
    if ideal == 0.0:
        return 1.0
    return _dcg(gains[list(ranked[:k])]) / ideal
