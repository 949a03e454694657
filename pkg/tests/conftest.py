import numpy as np
import pytest

from feedback_loop.harness.config import ExperimentConfig, build_config


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def small_config(tmp_path) -> ExperimentConfig:
    """A few hundred steps of a small recommendation environment, written under `tmp_path`."""
    return build_config(
        overrides={
            "env.num_actions": 6,
            "env.ctx_dim": 4,
            "steps": 300,
            "replicas": 2,
            "top_k": 3,
            "output": str(tmp_path / "results"),
        }
    )


class TwoArmEnvironment:
    """Stationary two-action environment with constant context (1.0): action 1 always yields
    `good`, action 0 always yields `bad`.
    """

    def __init__(self, good: float = 0.9, bad: float = 0.1) -> None:
        self.values = np.array([bad, good])
        self.ctx = np.array([1.0])

    def feedback(self, action: int) -> float:
        return float(self.values[action])


@pytest.fixture
def two_arm_env() -> TwoArmEnvironment:
    return TwoArmEnvironment()


@pytest.fixture
def narrow_two_arm_env() -> TwoArmEnvironment:
    """Both actions yield feedback near 0.5."""
    return TwoArmEnvironment(good=0.55, bad=0.45)
