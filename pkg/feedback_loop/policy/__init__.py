from feedback_loop.policy.softmax import (
    action_probabilities,
    action_scores,
    entropy,
    expected_value,
    init_params,
    log_prob_gradient,
    sample_action,
    top_k,
)

__all__ = [
    "action_probabilities",
    "action_scores",
    "entropy",
    "expected_value",
    "init_params",
    "log_prob_gradient",
    "sample_action",
    "top_k",
]
