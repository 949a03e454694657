from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from feedback_loop.baselines.batch import make_periodic, make_static_profile
from feedback_loop.baselines.context_static import make_context_aware_static
from feedback_loop.baselines.oracle import OracleAgent
from feedback_loop.baselines.simple_online import make_simple_online
from feedback_loop.core.agent import PersonalizationAgent
from feedback_loop.core.exceptions import check
from feedback_loop.core.types.policy import ContextVector, FloatArray
from feedback_loop.engine.agent import AdaptiveEngine
from feedback_loop.engine.gate import GateConfig
from feedback_loop.engine.optimizer import OptimizerConfig
from feedback_loop.engine.privacy import PrivacyConfig


class AgentKind(str, Enum):
    DP = "dp"
    """Adaptive engine with the feedback gate
    """
    SP = "sp"
    """Static profile
    """
    PU = "pu"
    """Periodic batch update
    """
    CAS = "cas"
    """Context-aware static profile
    """
    SOL = "sol"
    """Simple online learning
    """
    ORACLE = "oracle"
    """Plays the true best action; sanity reference
    """


AGENT_KINDS = [kind.value for kind in AgentKind]


@dataclass
class AgentConfig:
    """Which agent to run and the knobs of the baselines. The adaptive engine is configured
    through the `optimizer`, `gate` and `privacy` sections instead.
    """

    kind: str = AgentKind.DP.value
    warmup_steps: int = 1_000
    """Steps before the first fit of sp and cas
    """
    refit_interval: Optional[int] = None
    """Steps between batch refits. None uses 10,000 for sp and 1,000 for pu. 0 freezes sp after
    warm-up and is rejected for pu
    """
    fit_passes: int = 5
    fit_lr: float = 0.01
    buckets_per_dim: int = 2
    active_dims: int = 2
    fixed_lr: float = 0.1
    """Constant learning rate of sol
    """
    request_every: int = 5
    """Explicit-request cadence of sol
    """

    def validate(self) -> None:
        check(self.kind in AGENT_KINDS, "kind", f"must be one of {AGENT_KINDS}, got `{self.kind}`")
        check(self.warmup_steps > 0, "warmup_steps", f"must be > 0, got {self.warmup_steps}")
        check(
            self.refit_interval is None or self.refit_interval >= 0,
            "refit_interval",
            f"must be >= 0, got {self.refit_interval}",
        )
        check(
            self.kind != AgentKind.PU.value or self.refit_interval != 0,
            "refit_interval",
            "must be > 0 for pu, got 0",
        )
        check(self.fit_passes > 0, "fit_passes", f"must be > 0, got {self.fit_passes}")
        check(self.fit_lr > 0, "fit_lr", f"must be > 0, got {self.fit_lr}")
        check(self.buckets_per_dim >= 1, "buckets_per_dim", f"must be >= 1, got {self.buckets_per_dim}")
        check(self.active_dims >= 1, "active_dims", f"must be >= 1, got {self.active_dims}")
        check(self.fixed_lr > 0, "fixed_lr", f"must be > 0, got {self.fixed_lr}")
        check(self.request_every > 0, "request_every", f"must be > 0, got {self.request_every}")


def _static_refit_interval(refit_interval: Optional[int]) -> Optional[int]:
    if refit_interval is None:
        return 10_000
    return refit_interval or None


def build_agent(
    config: AgentConfig,
    num_actions: int,
    ctx_dim: int,
    rng: np.random.Generator,
    optimizer: Optional[OptimizerConfig] = None,
    gate: Optional[GateConfig] = None,
    privacy: Optional[PrivacyConfig] = None,
    oracle: Optional[Callable[[ContextVector], FloatArray]] = None,
) -> PersonalizationAgent:
    """Instantiate the agent selected by `config.kind`."""
    kind = AgentKind(config.kind)
    batch_kwargs = dict(fit_passes=config.fit_passes, fit_lr=config.fit_lr)

    if kind is AgentKind.DP:
        return AdaptiveEngine(num_actions, ctx_dim, rng, optimizer=optimizer, gate=gate, privacy=privacy)
    if kind is AgentKind.SP:
        return make_static_profile(
            num_actions,
            ctx_dim,
            rng,
            warmup_steps=config.warmup_steps,
            refit_interval=_static_refit_interval(config.refit_interval),
            **batch_kwargs,
        )
    if kind is AgentKind.PU:
        return make_periodic(num_actions, ctx_dim, rng, refit_interval=config.refit_interval or 1_000, **batch_kwargs)
    if kind is AgentKind.CAS:
        return make_context_aware_static(
            num_actions,
            ctx_dim,
            rng,
            warmup_steps=config.warmup_steps,
            buckets_per_dim=config.buckets_per_dim,
            active_dims=config.active_dims,
        )
    if kind is AgentKind.SOL:
        return make_simple_online(
            num_actions, ctx_dim, rng, fixed_lr=config.fixed_lr, request_every=config.request_every
        )

    if oracle is None:
        raise ValueError("The oracle agent needs an `oracle` callable.")
    return OracleAgent(num_actions, ctx_dim, rng, oracle=oracle)
