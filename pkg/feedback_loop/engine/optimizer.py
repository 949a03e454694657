from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from feedback_loop.core.exceptions import check
from feedback_loop.core.types.policy import ActionId, ContextVector, GradientVector, PolicyParams
from feedback_loop.engine.variance import VarianceTracker
from feedback_loop.policy import log_prob_gradient


@dataclass
class OptimizerConfig:
    """Hyperparameters of the variance-adapted momentum update."""

    alpha0: float = 0.01
    """Initial learning rate
    """
    beta: float = 0.1
    """How strongly the feedback variance damps the learning rate. 0 disables the adaptation
    """
    gamma: float = 0.9
    """Decay of both the momentum and the second-moment moving averages
    """
    eps_stab: float = 1e-8
    """Stability constant inside the square root
    """
    second_moment: bool = True
    """Whether to normalise the momentum by the second moment. When False the step is `lr * m`
    """
    baseline_horizon: Optional[int] = None
    """Horizon of the running feedback mean subtracted from the feedback before the gradient is
    formed. The mean is exact over the first `baseline_horizon` events and exponentially weighted
    afterwards. None uses the raw feedback
    """

    def validate(self) -> None:
        check(self.alpha0 > 0, "alpha0", f"must be > 0, got {self.alpha0}")
        check(self.beta >= 0, "beta", f"must be >= 0, got {self.beta}")
        check(0 <= self.gamma < 1, "gamma", f"must be in [0, 1), got {self.gamma}")
        check(self.eps_stab > 0, "eps_stab", f"must be > 0, got {self.eps_stab}")
        check(
            self.baseline_horizon is None or self.baseline_horizon > 0,
            "baseline_horizon",
            f"must be > 0, got {self.baseline_horizon}",
        )


@dataclass
class OptimizerState:
    """Moving averages of the gradient and of its entrywise square."""

    m: GradientVector
    v: GradientVector
    step: int = 0

    @classmethod
    def zeros_like(cls, params: PolicyParams) -> "OptimizerState":
        return cls(m=np.zeros_like(params), v=np.zeros_like(params), step=0)


def reinforce_gradient(
    params: PolicyParams, ctx: ContextVector, action: ActionId, feedback: float, baseline: float = 0.0
) -> GradientVector:
    """Score-function estimate of the gradient of expected satisfaction: the log-probability
    gradient of the played action scaled by the feedback it received, less `baseline`.

    Raises:
        ValueError: If `feedback` lies outside [0, 1].
    """
    if not 0.0 <= feedback <= 1.0:
        raise ValueError(f"`feedback` must be in [0, 1], got {feedback}.")
    return log_prob_gradient(params, ctx, action) * (feedback - baseline)


def update_baseline(baseline: float, count: int, feedback: float, horizon: int) -> float:
    """Running mean of the feedback over the last `horizon` events, approximately. `count` is the
    number of events seen including this one.
    """
    return baseline + (feedback - baseline) / min(count, horizon)


def adaptive_lr(config: OptimizerConfig, tracker: VarianceTracker) -> float:
    """`alpha0 / (1 + beta * Var[f_1..f_t])`, never larger than alpha0."""
    return config.alpha0 / (1.0 + config.beta * tracker.variance)


def apply_update(
    config: OptimizerConfig,
    state: OptimizerState,
    params: PolicyParams,
    grad: GradientVector,
    lr: float,
) -> Tuple[OptimizerState, PolicyParams]:
    """One gradient-ascent step. Returns new state and params; the inputs are not modified.

        m' = gamma * m + (1 - gamma) * g
        v' = gamma * v + (1 - gamma) * g^2
        params' = params + lr * m' / sqrt(v' + eps_stab)

    Raises:
        ValueError: If shapes disagree, `lr` is not positive or `grad` has non-finite entries.
    """
    if grad.shape != params.shape or state.m.shape != params.shape:
        raise ValueError(
            f"Shape mismatch: params {params.shape}, grad {grad.shape}, optimizer state {state.m.shape}."
        )
    if lr <= 0:
        raise ValueError(f"`lr` must be > 0, got {lr}.")
    if not np.all(np.isfinite(grad)):
        raise ValueError("Gradient has non-finite entries; update rejected.")

    gamma = config.gamma
    m = gamma * state.m + (1.0 - gamma) * grad
    if config.second_moment:
        v = gamma * state.v + (1.0 - gamma) * np.square(grad)
        step = m / np.sqrt(v + config.eps_stab)
    else:
        v = state.v
        step = m

    return OptimizerState(m=m, v=v, step=state.step + 1), params + lr * step
