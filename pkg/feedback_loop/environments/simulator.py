from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Optional

import numpy as np
from scipy.special import expit

from feedback_loop.core.types.feedback import FeedbackEvent, Observation
from feedback_loop.core.types.policy import ActionId, ContextVector, FloatArray
from feedback_loop.environments.config import EnvConfig, EnvKind
from feedback_loop.tools.logging import setup_logger

logger = setup_logger()


@dataclass
class EnvState:
    """Hidden state of one simulated user."""

    pref: FloatArray
    """Preference matrix, one row per action
    """
    engagement: float
    """Current engagement e_t in [0, 1]
    """
    recent_requests: Deque[int] = field(default_factory=deque)
    """Steps of the explicit requests that fall inside the trailing fatigue window
    """
    step: int = 0


def sample_preferences(num_actions: int, ctx_dim: int, rng: np.random.Generator) -> FloatArray:
    """Standard Gaussian matrix with every row scaled to unit norm."""
    pref = rng.standard_normal((num_actions, ctx_dim))
    return pref / np.linalg.norm(pref, axis=1, keepdims=True)


class UserSimulator:
    """Seeded synthetic user with drifting hidden preferences, change points, engagement and
    fatigue dynamics, and two feedback channels.

    Satisfaction is the logistic of `pref[a] @ ctx` for the recommendation and assistant kinds.
    For the learning kind, action `a` is content of difficulty `a / (|A| - 1)` and satisfaction
    is a Gaussian kernel around the learner's knowledge `logistic(pref[0] @ ctx)`.

    Every call to `act` consumes the same number of variates from the generator whatever the
    agent did, so agents run against the same seed see identical contexts and noise.
    """

    def __init__(self, config: EnvConfig, rng: Optional[np.random.Generator] = None) -> None:
        config.validate()
        self.config = config
        self.num_actions = config.resolved_num_actions
        self.ctx_dim = config.ctx_dim
        self._rng = rng if rng is not None else np.random.default_rng(config.seed)
        self._change_points = frozenset(config.change_points)
        self._difficulty = (
            np.linspace(0.0, 1.0, self.num_actions) if self.num_actions > 1 else np.array([0.5])
        )
        self.state = self.reset()

    def reset(self) -> EnvState:
        """Draw a fresh preference matrix and restore the initial engagement."""
        self.state = EnvState(
            pref=sample_preferences(self.num_actions, self.ctx_dim, self._rng),
            engagement=self.config.initial_engagement,
        )
        return self.state

    @property
    def preferences(self) -> FloatArray:
        return self.state.pref.copy()

    def observe(self) -> Observation:
        """Draw the context of the current step, entries i.i.d. uniform in [-1, 1]."""
        ctx = self._rng.uniform(-1.0, 1.0, size=self.ctx_dim)
        return Observation(ctx=ctx, engagement=self.state.engagement)

    def oracle_all(self, ctx: ContextVector) -> FloatArray:
        """True expected satisfaction of every action. Evaluation only, never shown to agents."""
        pref = self.state.pref
        if EnvKind(self.config.kind) is EnvKind.LEARNING:
            knowledge = expit(pref[0] @ ctx)
            return np.exp(-np.square(self._difficulty - knowledge) / self.config.kernel_width**2)
        return expit(pref @ ctx)

    def true_satisfaction(self, ctx: ContextVector, action: ActionId) -> float:
        """Noise-free satisfaction in [0, 1] of `action` in context `ctx`."""
        return float(self.oracle_all(ctx)[action])

    def act(self, ctx: ContextVector, action: ActionId, explicit_requested: bool) -> FeedbackEvent:
        """Play `action`, generate its feedback and advance the user by one step."""
        cfg, state = self.config, self.state
        fatigue = cfg.fatigue
        z_implicit, z_explicit = self._rng.standard_normal(2)
        u_comply = self._rng.random()

        true = self.true_satisfaction(ctx, action)
        implicit = float(np.clip(true + cfg.feedback_noise_implicit * z_implicit, 0.0, 1.0))

        while state.recent_requests and state.recent_requests[0] <= state.step - fatigue.window:
            state.recent_requests.popleft()

        explicit: Optional[float] = None
        complied = False
        if explicit_requested:
            p_comply = np.clip(fatigue.c0 - fatigue.c1 * len(state.recent_requests) / fatigue.window, 0.0, 1.0)
            complied = bool(u_comply < p_comply)
            if complied:
                explicit = float(np.clip(true + cfg.feedback_noise_explicit * z_explicit, 0.0, 1.0))
            state.recent_requests.append(state.step)
            state.engagement = max(0.0, state.engagement - fatigue.penalty)
        else:
            state.engagement = min(1.0, state.engagement + fatigue.recovery)

        event = FeedbackEvent(
            step=state.step,
            implicit=implicit,
            explicit=explicit,
            requested=explicit_requested,
            complied=complied,
        )
        self._advance()
        return event

    def _advance(self) -> None:
        state = self.state
        if self.config.drift_rate > 0:
            state.pref = state.pref + self.config.drift_rate * self._rng.standard_normal(state.pref.shape)
        state.step += 1
        if state.step in self._change_points:
            state.pref = sample_preferences(self.num_actions, self.ctx_dim, self._rng)
            logger.debug(f"Preferences resampled at change point t={state.step}.")
