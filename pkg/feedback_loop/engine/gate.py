from dataclasses import dataclass
from enum import Enum
from typing import Optional

from feedback_loop.core.exceptions import check


class GateMode(str, Enum):
    """When explicit feedback is requested."""

    ADAPTIVE = "adaptive"
    """Uncertainty, minimum-interval and engagement conditions must all hold
    """
    INTERVAL = "interval"
    """Only the minimum-interval condition; requests are not prioritised
    """
    ALWAYS = "always"
    """Every step
    """
    PERIODIC = "periodic"
    """Every step whose index is a multiple of `period`
    """
    OFF = "off"
    """Never
    """


@dataclass
class GateConfig:
    """Thresholds of the explicit-feedback gate."""

    tau_u: float = 0.3
    """Entropy threshold in nats. The policy must be more uncertain than this
    """
    delta_min: int = 5
    """Minimum number of steps between two requests (exclusive)
    """
    tau_e: float = 0.6
    """Engagement threshold in [0, 1]
    """
    mode: str = GateMode.ADAPTIVE.value
    """One of the GateMode values
    """
    period: int = 5
    """Request cadence used by the periodic mode
    """

    def validate(self) -> None:
        check(self.tau_u >= 0, "tau_u", f"must be >= 0, got {self.tau_u}")
        check(self.delta_min >= 0, "delta_min", f"must be >= 0, got {self.delta_min}")
        check(0 <= self.tau_e <= 1, "tau_e", f"must be in [0, 1], got {self.tau_e}")
        check(self.mode in {m.value for m in GateMode}, "mode", f"unknown gate mode `{self.mode}`")
        check(self.period > 0, "period", f"must be > 0, got {self.period}")


@dataclass
class GateState:
    t_last: Optional[int] = None
    """Step of the last explicit request, None if nothing was ever requested
    """


def _interval_elapsed(config: GateConfig, state: GateState, t: int) -> bool:
    # "Never requested" behaves like an infinite interval.
    return state.t_last is None or t - state.t_last > config.delta_min


def should_request(config: GateConfig, state: GateState, uncertainty: float, t: int, engagement: float) -> bool:
    """True iff uncertainty > tau_u, t - t_last > delta_min and engagement > tau_e."""
    return (
        uncertainty > config.tau_u
        and _interval_elapsed(config, state, t)
        and engagement > config.tau_e
    )


def gate_decision(config: GateConfig, state: GateState, uncertainty: float, t: int, engagement: float) -> bool:
    """Apply the rule selected by `config.mode`."""
    mode = GateMode(config.mode)
    if mode is GateMode.ADAPTIVE:
        return should_request(config, state, uncertainty, t, engagement)
    if mode is GateMode.INTERVAL:
        return _interval_elapsed(config, state, t)
    if mode is GateMode.ALWAYS:
        return True
    if mode is GateMode.PERIODIC:
        return t % config.period == 0
    return False


def record_request(state: GateState, t: int) -> GateState:
    """Return the state after an explicit request at step `t`.

    Raises:
        ValueError: If `t` is earlier than the last recorded request.
    """
    if state.t_last is not None and t < state.t_last:
        raise ValueError(f"Cannot record a request at t={t}; the last one was at t={state.t_last}.")
    return GateState(t_last=t)

