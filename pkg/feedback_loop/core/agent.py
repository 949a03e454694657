from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from feedback_loop.core.types.feedback import FeedbackEvent, Observation
from feedback_loop.core.types.policy import ActionDistribution, ActionId, ContextVector, Ranking
from feedback_loop.policy import sample_action


class PersonalizationAgent(ABC):
    """This is the abstract class for every agent the harness can run. It only ever sees
    Observations and FeedbackEvents, never the simulator state or the oracle.

    It requires the implementation of the following methods:
        - action_distribution
        - ingest

    and may override:
        - _request_feedback: whether to ask for explicit feedback at the current step
        - _on_selected: bookkeeping once the action of a step is known
    """

    name: str = "agent"

    def __init__(self, num_actions: int, ctx_dim: int, rng: np.random.Generator) -> None:
        self.num_actions = num_actions
        self.ctx_dim = ctx_dim
        self._rng = rng
        self._t = 0
        self.last_distribution: Optional[ActionDistribution] = None
        """Distribution the most recent action was drawn from
        """

    @property
    def t(self) -> int:
        """Index of the next step."""
        return self._t

    @property
    def learning_rate(self) -> float:
        """Step size of the most recent parameter update, 0 for agents that do not learn online."""
        return 0.0

    @abstractmethod
    def action_distribution(self, ctx: ContextVector) -> ActionDistribution:
        raise NotImplementedError

    @abstractmethod
    def ingest(self, event: FeedbackEvent) -> None:
        raise NotImplementedError

    def _request_feedback(self, t: int, dist: ActionDistribution, obs: Observation) -> bool:
        return False

    def _on_selected(self, t: int, ctx: ContextVector, action: ActionId) -> None:
        pass

    def select(self, obs: Observation) -> Tuple[ActionId, bool]:
        """Choose the action for the current step and whether to request explicit feedback."""
        dist = self.action_distribution(obs.ctx)
        self.last_distribution = dist

        action = sample_action(dist, self._rng)
        requested = self._request_feedback(self._t, dist, obs)
        self._on_selected(self._t, obs.ctx, action)
        self._t += 1
        return action, requested

    def ranking(self, ctx: ContextVector, k: int) -> Ranking:
        """The `k` most probable actions, ties broken by ascending id."""
        if not 1 <= k <= self.num_actions:
            raise ValueError(f"`k` must be in [1, {self.num_actions}], got {k}.")
        order = np.argsort(-self.action_distribution(ctx), kind="stable")
        return [int(a) for a in order[:k]]
