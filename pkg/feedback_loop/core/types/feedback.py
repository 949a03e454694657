from typing import NamedTuple, Optional

from feedback_loop.core.types.policy import ActionId, ContextVector


class Observation(NamedTuple):
    """What an agent sees before acting."""

    ctx: ContextVector
    """User context, entries in [-1, 1]
    """
    engagement: float
    """Current user engagement in [0, 1]
    """


class FeedbackEvent(NamedTuple):
    """Feedback generated by the user for a single step."""

    step: int
    """Step at which the action was taken
    """
    implicit: float
    """Behavioural satisfaction signal in [0, 1], always present
    """
    explicit: Optional[float] = None
    """Solicited rating in [0, 1]; only present when requested and the user complied
    """
    requested: bool = False
    complied: bool = False

    @property
    def value(self) -> float:
        """The feedback used for learning: explicit when available, otherwise implicit."""
        return self.explicit if self.explicit is not None else self.implicit
