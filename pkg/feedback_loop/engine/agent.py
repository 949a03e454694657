from typing import Dict, NamedTuple, Optional

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
from feedback_loop.engine.gate import GateConfig, GateState, gate_decision, record_request
from feedback_loop.engine.optimizer import (
    OptimizerConfig,
    OptimizerState,
    adaptive_lr,
    apply_update,
    reinforce_gradient,
    update_baseline,
)
from feedback_loop.engine.privacy import PrivacyConfig, epsilon_spent, noise_scale, privatize
from feedback_loop.engine.variance import VarianceTracker, observe_feedback
from feedback_loop.policy import action_probabilities, entropy, init_params, top_k
from feedback_loop.tools.logging import setup_logger

logger = setup_logger()


class PendingStep(NamedTuple):
    """A step whose feedback has not been ingested yet."""

    ctx: ContextVector
    action: ActionId


class AdaptiveEngine(PersonalizationAgent):
    """Online policy-gradient learner with a variance-adapted learning rate, momentum and
    second-moment normalisation, and an explicit-feedback gate.

    Each step samples an action from the softmax-linear policy and asks the gate whether to
    request explicit feedback. When the feedback of a step arrives (possibly delayed) it updates
    the running feedback variance, computes the REINFORCE gradient at the current parameters,
    optionally clips and noises it, and applies the momentum update with the adapted rate.

    One engine serves one simulated user; it is single-writer.
    """

    name = "dp"

    def __init__(
        self,
        num_actions: int,
        ctx_dim: int,
        rng: np.random.Generator,
        optimizer: Optional[OptimizerConfig] = None,
        gate: Optional[GateConfig] = None,
        privacy: Optional[PrivacyConfig] = None,
        name: Optional[str] = None,
    ) -> None:
        super().__init__(num_actions, ctx_dim, rng)
        self.optimizer_config = optimizer or OptimizerConfig()
        self.gate_config = gate or GateConfig()
        self.privacy_config = privacy or PrivacyConfig()
        self.optimizer_config.validate()
        self.gate_config.validate()
        self.privacy_config.validate()
        if name is not None:
            self.name = name

        self._params = init_params(num_actions, ctx_dim)
        self._opt_state = OptimizerState.zeros_like(self._params)
        self._tracker = VarianceTracker()
        self._gate_state = GateState()
        self._pending: Dict[int, PendingStep] = {}
        self._lr = self.optimizer_config.alpha0
        self._baseline = 0.0

        self._sigma = 0.0
        if self.privacy_config.enabled:
            self._sigma = noise_scale(self.privacy_config)
            spent = epsilon_spent(
                self._sigma,
                self.privacy_config.clip_norm,
                self.privacy_config.horizon or 1,
                self.privacy_config.delta,
            )
            logger.debug(
                f"Engine `{self.name}` noises gradients with sigma={self._sigma:.4g}, "
                f"spending (epsilon={spent:.4g}, delta={self.privacy_config.delta:.1e})."
            )

    @property
    def params(self) -> PolicyParams:
        return self._params.copy()

    @property
    def learning_rate(self) -> float:
        return self._lr

    @property
    def baseline(self) -> float:
        """Feedback level subtracted before the gradient; 0 unless `baseline_horizon` is set."""
        return self._baseline

    @property
    def tracker(self) -> VarianceTracker:
        return self._tracker

    @property
    def gate_state(self) -> GateState:
        return self._gate_state

    @property
    def noise_sigma(self) -> float:
        return self._sigma

    @property
    def num_pending(self) -> int:
        return len(self._pending)

    def action_distribution(self, ctx: ContextVector) -> ActionDistribution:
        return action_probabilities(self._params, ctx)

    def ranking(self, ctx: ContextVector, k: int) -> Ranking:
        return top_k(self._params, ctx, k)

    def _request_feedback(self, t: int, dist: ActionDistribution, obs: Observation) -> bool:
        if not gate_decision(self.gate_config, self._gate_state, entropy(dist), t, obs.engagement):
            return False
        self._gate_state = record_request(self._gate_state, t)
        return True

    def _on_selected(self, t: int, ctx: ContextVector, action: ActionId) -> None:
        self._pending[t] = PendingStep(ctx, action)

    def ingest(self, event: FeedbackEvent) -> None:
        """Update the policy with the feedback of a previously selected step.

        Raises:
            KeyError: If no selected step is waiting for feedback at `event.step`.
            ValueError: If the gradient is not finite; the engine is left unchanged.
        """
        if event.step not in self._pending:
            raise KeyError(f"No pending step {event.step}; feedback must follow `select` and arrive once.")
        ctx, action = self._pending[event.step]
        feedback = event.value

        horizon = self.optimizer_config.baseline_horizon
        grad = reinforce_gradient(self._params, ctx, action, feedback, baseline=self._baseline)
        if self.privacy_config.enabled:
            grad = privatize(grad, self.privacy_config.clip_norm, self._sigma, self._rng)

        tracker = observe_feedback(VarianceTracker(**vars(self._tracker)), feedback)
        baseline = self._baseline
        if horizon is not None:
            baseline = update_baseline(baseline, tracker.count, feedback, horizon)
        lr = adaptive_lr(self.optimizer_config, tracker)
        self._opt_state, self._params = apply_update(self.optimizer_config, self._opt_state, self._params, grad, lr)

        del self._pending[event.step]
        self._tracker = tracker
        self._baseline = baseline
        self._lr = lr
