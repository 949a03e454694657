"""Gaussian mechanism for gradient updates.

Gradients are clipped to a Frobenius norm of at most `clip_norm` (the L2 sensitivity of one
feedback event) and then perturbed with isotropic Gaussian noise. The noise scale composes the
per-step mechanism over `horizon` steps:

    sigma = clip_norm * sqrt(2 * horizon * ln(1.25 / delta)) / epsilon

Adjacency is per feedback event.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from feedback_loop.core.exceptions import check
from feedback_loop.core.types.policy import GradientVector


@dataclass
class PrivacyConfig:
    enabled: bool = False
    """Clip and noise every gradient before it reaches the optimizer
    """
    epsilon: float = 1.0
    """Total privacy budget over the horizon
    """
    delta: float = 1e-5
    """Failure probability of the guarantee
    """
    clip_norm: float = 1.0
    """L2 sensitivity bound enforced by clipping
    """
    horizon: Optional[int] = None
    """Number of noised updates covered by the budget. None lets the harness use the experiment length
    """

    def validate(self) -> None:
        check(self.epsilon > 0, "epsilon", f"must be > 0, got {self.epsilon}")
        check(0 < self.delta < 1, "delta", f"must be in (0, 1), got {self.delta}")
        check(self.clip_norm > 0, "clip_norm", f"must be > 0, got {self.clip_norm}")
        check(self.horizon is None or self.horizon > 0, "horizon", f"must be > 0, got {self.horizon}")


def clip_gradient(grad: GradientVector, clip_norm: float) -> GradientVector:
    """Rescale `grad` onto the ball of radius `clip_norm`; gradients already inside are returned as is."""
    if clip_norm <= 0:
        raise ValueError(f"`clip_norm` must be > 0, got {clip_norm}.")
    norm = float(np.linalg.norm(grad))
    if norm <= clip_norm:
        return grad
    return grad * (clip_norm / norm)


def noise_scale(config: PrivacyConfig) -> float:
    """Standard deviation of the Gaussian noise that spends `config.epsilon` over the horizon."""
    if config.horizon is None:
        raise ValueError("`horizon` must be set before the noise scale can be computed.")
    return config.clip_norm * math.sqrt(2.0 * config.horizon * math.log(1.25 / config.delta)) / config.epsilon


def epsilon_spent(sigma: float, clip_norm: float, horizon: int, delta: float) -> float:
    """Privacy budget spent by `horizon` updates noised with standard deviation `sigma`."""
    if sigma <= 0:
        return math.inf
    return clip_norm * math.sqrt(2.0 * horizon * math.log(1.25 / delta)) / sigma


def add_noise(grad: GradientVector, sigma: float, rng: np.random.Generator) -> GradientVector:
    """Add independent N(0, sigma^2) noise to every entry. `sigma == 0` returns `grad` unchanged."""
    if sigma < 0:
        raise ValueError(f"`sigma` must be >= 0, got {sigma}.")
    if sigma == 0:
        return grad
    return grad + rng.normal(0.0, sigma, size=grad.shape)


def privatize(grad: GradientVector, clip_norm: float, sigma: float, rng: np.random.Generator) -> GradientVector:
    """Clip, then noise."""
    return add_noise(clip_gradient(grad, clip_norm), sigma, rng)
