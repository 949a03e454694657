from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from feedback_loop.core.exceptions import ConfigurationError, check


class EnvKind(str, Enum):
    RECOMMENDATION = "recommendation"
    ASSISTANT = "assistant"
    LEARNING = "learning"


DEFAULT_NUM_ACTIONS: Dict[EnvKind, int] = {
    EnvKind.RECOMMENDATION: 50,
    EnvKind.ASSISTANT: 8,
    EnvKind.LEARNING: 10,
}
"""Action-space size used when `num_actions` is left unset.
"""


@dataclass
class FatigueConfig:
    """How explicit-feedback requests wear the user down."""

    c0: float = 0.85
    """Compliance probability of a rested user
    """
    c1: float = 1.5
    """Compliance lost per unit of request rate over the trailing window
    """
    window: int = 50
    """Length W of the trailing window, in steps
    """
    penalty: float = 0.02
    """Engagement lost on every request
    """
    recovery: float = 0.005
    """Engagement regained on every step without a request
    """

    def validate(self) -> None:
        check(0 <= self.c0 <= 1, "c0", f"must be in [0, 1], got {self.c0}")
        check(self.c1 >= 0, "c1", f"must be >= 0, got {self.c1}")
        check(self.window >= 1, "window", f"must be >= 1, got {self.window}")
        check(self.penalty >= 0, "penalty", f"must be >= 0, got {self.penalty}")
        check(self.recovery >= 0, "recovery", f"must be >= 0, got {self.recovery}")


@dataclass
class EnvConfig:
    """Synthetic user population of one experiment."""

    kind: str = EnvKind.RECOMMENDATION.value
    """One of recommendation, assistant or learning
    """
    num_actions: Optional[int] = None
    """Size of the action space. None uses the default of `kind`
    """
    ctx_dim: int = 16
    """Dimension d of the context vector
    """
    drift_rate: float = 0.0
    """Scale of the per-step Gaussian random walk of the preference matrix
    """
    change_points: List[int] = field(default_factory=list)
    """Steps at which the preference matrix is resampled entirely
    """
    feedback_noise_implicit: float = 0.1
    """Std dev of the noise on implicit feedback
    """
    feedback_noise_explicit: float = 0.03
    """Std dev of the noise on explicit feedback, lower than the implicit one
    """
    fatigue: FatigueConfig = field(default_factory=FatigueConfig)
    kernel_width: float = 0.25
    """Width of the difficulty-match kernel of the learning kind
    """
    initial_engagement: float = 0.8
    seed: int = 0
    """Seed used when a simulator is built without an explicit generator. Experiments seed the
    simulator from their own `seed` and reject any other value here
    """

    @property
    def resolved_num_actions(self) -> int:
        return self.num_actions if self.num_actions is not None else DEFAULT_NUM_ACTIONS[EnvKind(self.kind)]

    def validate(self) -> None:
        check(self.kind in {k.value for k in EnvKind}, "kind", f"unknown environment kind `{self.kind}`")
        check(self.resolved_num_actions >= 1, "num_actions", f"must be >= 1, got {self.num_actions}")
        check(self.ctx_dim >= 1, "ctx_dim", f"must be >= 1, got {self.ctx_dim}")
        check(self.drift_rate >= 0, "drift_rate", f"must be >= 0, got {self.drift_rate}")
        check(
            self.feedback_noise_implicit >= 0,
            "feedback_noise_implicit",
            f"must be >= 0, got {self.feedback_noise_implicit}",
        )
        check(
            self.feedback_noise_explicit >= 0,
            "feedback_noise_explicit",
            f"must be >= 0, got {self.feedback_noise_explicit}",
        )
        # Both channels may be noiseless; otherwise explicit feedback must be the cleaner one.
        check(
            self.feedback_noise_explicit < self.feedback_noise_implicit
            or self.feedback_noise_explicit == self.feedback_noise_implicit == 0,
            "feedback_noise_explicit",
            "must be lower than `feedback_noise_implicit`",
        )
        check(
            all(cp >= 1 for cp in self.change_points)
            and all(a < b for a, b in zip(self.change_points, self.change_points[1:])),
            "change_points",
            f"must be positive and strictly increasing, got {list(self.change_points)}",
        )
        check(self.kernel_width > 0, "kernel_width", f"must be > 0, got {self.kernel_width}")
        check(
            0 <= self.initial_engagement <= 1,
            "initial_engagement",
            f"must be in [0, 1], got {self.initial_engagement}",
        )
        try:
            self.fatigue.validate()
        except ConfigurationError as e:
            raise e.with_prefix("fatigue")
