"""Softmax-linear contextual policy.

Each action `a` is scored by `weights[a] @ ctx` and the policy is the softmax of those scores.
All functions are pure; the random generator passed to `sample_action` is the only state.
"""
from typing import Sequence

import numpy as np
from scipy.special import softmax
from scipy.stats import entropy as shannon_entropy

from feedback_loop.core.exceptions import ConfigurationError
from feedback_loop.core.types.policy import (
    ActionDistribution,
    ActionId,
    ContextVector,
    FloatArray,
    GradientVector,
    PolicyParams,
    Ranking,
)

__all__: Sequence[str] = (
    "init_params",
    "action_scores",
    "action_probabilities",
    "sample_action",
    "log_prob_gradient",
    "entropy",
    "expected_value",
    "top_k",
)


def init_params(num_actions: int, ctx_dim: int) -> PolicyParams:
    """All-zero weights, i.e. the uniform policy."""
    if num_actions < 1 or ctx_dim < 1:
        raise ConfigurationError("policy", f"shape must be positive, got ({num_actions}, {ctx_dim})")
    return np.zeros((num_actions, ctx_dim), dtype=np.float64)


def action_scores(params: PolicyParams, ctx: ContextVector) -> FloatArray:
    """Linear score of every action for the given context."""
    if params.ndim != 2 or ctx.ndim != 1 or params.shape[1] != ctx.shape[0]:
        raise ConfigurationError(
            "ctx_dim", f"params of shape {params.shape} cannot score a context of shape {ctx.shape}"
        )
    return params @ ctx


def action_probabilities(params: PolicyParams, ctx: ContextVector) -> ActionDistribution:
    """Softmax of the per-action scores. The max score is subtracted before exponentiation, so
    arbitrarily large scores do not overflow.
    """
    return softmax(action_scores(params, ctx))


def sample_action(dist: ActionDistribution, rng: np.random.Generator) -> ActionId:
    """Draw an action index with probability `dist[i]`. Deterministic given the rng state."""
    return int(rng.choice(dist.shape[0], p=dist))


def log_prob_gradient(params: PolicyParams, ctx: ContextVector, action: ActionId) -> GradientVector:
    """Gradient of `log pi(action | ctx)` w.r.t. the weights.

    Row `a'` equals `(1[a' == action] - pi(a' | ctx)) * ctx`.
    """
    num_actions = params.shape[0]
    if not 0 <= action < num_actions:
        raise ValueError(f"`action` must be in [0, {num_actions}), got {action}.")

    coef = -action_probabilities(params, ctx)
    coef[action] += 1.0
    return np.outer(coef, ctx)


def entropy(dist: ActionDistribution) -> float:
    """Shannon entropy in nats, with 0 * log 0 taken as 0. Lies in [0, ln |A|]."""
    return float(shannon_entropy(dist))


def expected_value(dist: ActionDistribution, values: FloatArray) -> float:
    """Expectation of per-action `values` when the action is drawn from `dist`."""
    if dist.shape != values.shape:
        raise ValueError(f"`dist` and `values` must have the same shape, got {dist.shape} and {values.shape}.")
    return float(dist @ values)


def top_k(params: PolicyParams, ctx: ContextVector, k: int) -> Ranking:
    """The `k` highest scoring actions in descending score order, ties broken by ascending id."""
    num_actions = params.shape[0]
    if not 1 <= k <= num_actions:
        raise ValueError(f"`k` must be in [1, {num_actions}], got {k}.")

    # A stable sort on the negated scores keeps equal scores in ascending id order.
    order = np.argsort(-action_scores(params, ctx), kind="stable")
    return [int(a) for a in order[:k]]
