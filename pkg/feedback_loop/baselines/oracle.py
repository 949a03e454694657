from typing import Callable

import numpy as np

from feedback_loop.core.agent import PersonalizationAgent
from feedback_loop.core.types.feedback import FeedbackEvent
from feedback_loop.core.types.policy import ActionDistribution, ContextVector, FloatArray


class OracleAgent(PersonalizationAgent):
    """Always plays the best action according to an injected oracle. Sanity reference only:
    its regret is zero by construction.
    """

    name = "oracle"

    def __init__(
        self,
        num_actions: int,
        ctx_dim: int,
        rng: np.random.Generator,
        oracle: Callable[[ContextVector], FloatArray],
    ) -> None:
        super().__init__(num_actions, ctx_dim, rng)
        self._oracle = oracle

    def action_distribution(self, ctx: ContextVector) -> ActionDistribution:
        dist = np.zeros(self.num_actions)
        dist[int(np.argmax(self._oracle(ctx)))] = 1.0
        return dist

    def ingest(self, event: FeedbackEvent) -> None:
        pass
