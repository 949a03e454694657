from dataclasses import dataclass, field
from typing import List

import numpy as np

from feedback_loop.core.types.policy import ActionDistribution, FloatArray
from feedback_loop.policy import expected_value


def instantaneous_regret(oracle_values: FloatArray, dist: ActionDistribution) -> float:
    """Gap between the best achievable satisfaction and the policy's expected satisfaction,
    `max(oracle_values) - dist @ oracle_values`. Clamped at 0 to absorb rounding.
    """
    if len(oracle_values) != len(dist):
        raise ValueError(
            f"`oracle_values` and `dist` must have the same length, got {len(oracle_values)} and {len(dist)}."
        )
    oracle_values, dist = np.asarray(oracle_values, dtype=float), np.asarray(dist, dtype=float)
    return max(0.0, float(np.max(oracle_values)) - expected_value(dist, oracle_values))


@dataclass
class RegretLedger:
    """Running record of instantaneous and cumulative regret."""

    instantaneous: List[float] = field(default_factory=list)
    cumulative: List[float] = field(default_factory=list)

    @property
    def total(self) -> float:
        return self.cumulative[-1] if self.cumulative else 0.0

    def record(self, oracle_values: FloatArray, dist: ActionDistribution) -> float:
        """Append the regret of one step and return it."""
        regret = instantaneous_regret(oracle_values, dist)
        self.instantaneous.append(regret)
        self.cumulative.append(self.total + regret)
        return regret

    def __len__(self) -> int:
        return len(self.instantaneous)
