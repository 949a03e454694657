from typing import Dict, Tuple

import numpy as np

from feedback_loop.core.agent import PersonalizationAgent
from feedback_loop.core.types.feedback import FeedbackEvent
from feedback_loop.core.types.policy import ActionDistribution, ActionId, ContextVector, FloatArray


class ContextAwareStaticAgent(PersonalizationAgent):
    """Static profile with explicit context modelling.

    The first `active_dims` context dimensions are each cut into `buckets_per_dim` equal-width
    buckets over [-1, 1] (two buckets split on the sign), giving `buckets_per_dim ** active_dims`
    cells. During the warm-up actions are explored uniformly and the mean feedback of every
    (cell, action) pair is recorded. Afterwards the agent greedily plays the action with the best
    cell mean, lowest id on ties, and never updates again. Pairs without data fall back to the
    global mean of the action.
    """

    name = "cas"

    def __init__(
        self,
        num_actions: int,
        ctx_dim: int,
        rng: np.random.Generator,
        warmup_steps: int = 1_000,
        buckets_per_dim: int = 2,
        active_dims: int = 2,
    ) -> None:
        if warmup_steps <= 0:
            raise ValueError(f"`warmup_steps` must be > 0, got {warmup_steps}.")
        if buckets_per_dim < 1:
            raise ValueError(f"`buckets_per_dim` must be >= 1, got {buckets_per_dim}.")
        if not 1 <= active_dims <= ctx_dim:
            raise ValueError(f"`active_dims` must be in [1, {ctx_dim}], got {active_dims}.")

        super().__init__(num_actions, ctx_dim, rng)
        self.warmup_steps = warmup_steps
        self.buckets_per_dim = buckets_per_dim
        self.active_dims = active_dims

        self._sums = np.zeros((self.num_cells, num_actions))
        self._counts = np.zeros((self.num_cells, num_actions), dtype=np.int64)
        self._pending: Dict[int, Tuple[int, ActionId]] = {}
        self._uniform = np.full(num_actions, 1.0 / num_actions)

    @property
    def num_cells(self) -> int:
        return self.buckets_per_dim**self.active_dims

    def cell_index(self, ctx: ContextVector) -> int:
        """Row-major index of the cell that `ctx` falls into."""
        b = self.buckets_per_dim
        buckets = np.clip(np.floor((ctx[: self.active_dims] + 1.0) / 2.0 * b), 0, b - 1).astype(np.int64)
        return int(np.ravel_multi_index(tuple(buckets), (b,) * self.active_dims))

    @property
    def global_means(self) -> FloatArray:
        sums, counts = self._sums.sum(axis=0), self._counts.sum(axis=0)
        return np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)

    def cell_means(self, cell: int) -> FloatArray:
        """Mean feedback per action in `cell`, global action means where the cell has no data."""
        counts = self._counts[cell]
        return np.where(counts > 0, self._sums[cell] / np.maximum(counts, 1), self.global_means)

    def action_distribution(self, ctx: ContextVector) -> ActionDistribution:
        if self._t < self.warmup_steps:
            return self._uniform
        dist = np.zeros(self.num_actions)
        dist[int(np.argmax(self.cell_means(self.cell_index(ctx))))] = 1.0
        return dist

    def _on_selected(self, t: int, ctx: ContextVector, action: ActionId) -> None:
        if t < self.warmup_steps:
            self._pending[t] = (self.cell_index(ctx), action)

    def ingest(self, event: FeedbackEvent) -> None:
        # Only feedback generated during the warm-up is kept; later events are acknowledged.
        if event.step >= self.warmup_steps:
            return
        cell, action = self._pending.pop(event.step)
        self._sums[cell, action] += event.value
        self._counts[cell, action] += 1


def make_context_aware_static(
    num_actions: int,
    ctx_dim: int,
    rng: np.random.Generator,
    warmup_steps: int = 1_000,
    buckets_per_dim: int = 2,
    active_dims: int = 2,
) -> ContextAwareStaticAgent:
    """Context-aware static profile; `active_dims` is capped at the context dimension."""
    return ContextAwareStaticAgent(
        num_actions,
        ctx_dim,
        rng,
        warmup_steps=warmup_steps,
        buckets_per_dim=buckets_per_dim,
        active_dims=min(active_dims, ctx_dim),
    )
