import numpy as np

from feedback_loop.engine.agent import AdaptiveEngine
from feedback_loop.engine.gate import GateConfig, GateMode
from feedback_loop.engine.optimizer import OptimizerConfig


def make_simple_online(
    num_actions: int,
    ctx_dim: int,
    rng: np.random.Generator,
    fixed_lr: float = 0.1,
    request_every: int = 5,
) -> AdaptiveEngine:
    """Plain online policy gradient: the adaptive engine's machinery with a constant learning rate,
    no momentum, no second-moment normalisation, and an explicit request at every step that is a
    multiple of `request_every` regardless of uncertainty or engagement.
    """
    if request_every <= 0:
        raise ValueError(f"`request_every` must be > 0, got {request_every}.")
    return AdaptiveEngine(
        num_actions,
        ctx_dim,
        rng,
        optimizer=OptimizerConfig(alpha0=fixed_lr, beta=0.0, gamma=0.0, second_moment=False),
        gate=GateConfig(mode=GateMode.PERIODIC.value, period=request_every),
        name="sol",
    )
