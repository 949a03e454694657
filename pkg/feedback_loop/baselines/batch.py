from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from feedback_loop.core.agent import PersonalizationAgent
from feedback_loop.core.types.feedback import FeedbackEvent, Observation
from feedback_loop.core.types.policy import (
    ActionDistribution,
    ActionId,
    ContextVector,
    PolicyParams,
    Ranking,
)
from feedback_loop.engine.optimizer import reinforce_gradient
from feedback_loop.policy import action_probabilities, init_params, top_k
from feedback_loop.tools.logging import setup_logger

logger = setup_logger()


class BufferedFeedback(NamedTuple):
    ctx: ContextVector
    action: ActionId
    feedback: float


class BatchRefitAgent(PersonalizationAgent):
    """Softmax-linear policy that is frozen between scheduled batch refits.

    The policy starts uniform. Feedback is buffered; at step `warmup_steps` and then every
    `refit_interval` steps the weights are fitted by `fit_passes` passes of fixed-rate gradient
    ascent over the buffer, and the buffer is cleared. `refit_interval=None` never refits after
    the warm-up. Explicit feedback is never requested.
    """

    def __init__(
        self,
        num_actions: int,
        ctx_dim: int,
        rng: np.random.Generator,
        warmup_steps: int,
        refit_interval: Optional[int],
        fit_passes: int = 5,
        fit_lr: float = 0.01,
        name: str = "sp",
    ) -> None:
        if warmup_steps <= 0:
            raise ValueError(f"`warmup_steps` must be > 0, got {warmup_steps}.")
        if refit_interval is not None and refit_interval <= 0:
            raise ValueError(f"`refit_interval` must be > 0 or None, got {refit_interval}.")
        if fit_passes <= 0 or fit_lr <= 0:
            raise ValueError(f"`fit_passes` and `fit_lr` must be > 0, got {fit_passes} and {fit_lr}.")

        super().__init__(num_actions, ctx_dim, rng)
        self.name = name
        self.warmup_steps = warmup_steps
        self.refit_interval = refit_interval
        self.fit_passes = fit_passes
        self.fit_lr = fit_lr

        self._params = init_params(num_actions, ctx_dim)
        self._pending: Dict[int, BufferedFeedback] = {}
        self.buffer: List[BufferedFeedback] = []
        self.refit_steps: List[int] = []
        """Steps at which a refit changed the weights
        """

    @property
    def params(self) -> PolicyParams:
        return self._params.copy()

    @property
    def learning_rate(self) -> float:
        return self.fit_lr

    def is_refit_step(self, t: int) -> bool:
        if t == self.warmup_steps:
            return True
        if self.refit_interval is None or t < self.warmup_steps:
            return False
        return (t - self.warmup_steps) % self.refit_interval == 0

    def refit(self) -> None:
        """Fit the weights on the buffered feedback and clear the buffer."""
        if not self.buffer:
            logger.debug(f"`{self.name}` skipped the refit at t={self._t}: no feedback buffered.")
            return

        params = self._params
        for _ in range(self.fit_passes):
            for ctx, action, feedback in self.buffer:
                params = params + self.fit_lr * reinforce_gradient(params, ctx, action, feedback)
        self._params = params
        self.refit_steps.append(self._t)
        logger.debug(f"`{self.name}` refit on {len(self.buffer)} events at t={self._t}.")
        self.buffer.clear()

    def select(self, obs: Observation) -> Tuple[ActionId, bool]:
        if self.is_refit_step(self._t):
            self.refit()
        return super().select(obs)

    def action_distribution(self, ctx: ContextVector) -> ActionDistribution:
        return action_probabilities(self._params, ctx)

    def ranking(self, ctx: ContextVector, k: int) -> Ranking:
        return top_k(self._params, ctx, k)

    def _on_selected(self, t: int, ctx: ContextVector, action: ActionId) -> None:
        self._pending[t] = BufferedFeedback(ctx, action, float("nan"))

    def ingest(self, event: FeedbackEvent) -> None:
        pending = self._pending.pop(event.step, None)
        if pending is None:
            raise KeyError(f"No pending step {event.step}; feedback must follow `select` and arrive once.")
        self.buffer.append(pending._replace(feedback=event.value))


def make_static_profile(
    num_actions: int,
    ctx_dim: int,
    rng: np.random.Generator,
    warmup_steps: int = 1_000,
    refit_interval: Optional[int] = 10_000,
    **kwargs: Any,
) -> BatchRefitAgent:
    """Static user profile: fitted after the warm-up, then refreshed on a long cadence."""
    return BatchRefitAgent(num_actions, ctx_dim, rng, warmup_steps, refit_interval, name="sp", **kwargs)


def make_periodic(
    num_actions: int,
    ctx_dim: int,
    rng: np.random.Generator,
    refit_interval: int = 1_000,
    **kwargs: Any,
) -> BatchRefitAgent:
    """Periodic batch update: refitted at every multiple of `refit_interval` on the feedback
    gathered since the previous refit.
    """
    return BatchRefitAgent(num_actions, ctx_dim, rng, refit_interval, refit_interval, name="pu", **kwargs)
