from feedback_loop.engine.agent import AdaptiveEngine
from feedback_loop.engine.gate import GateConfig, GateMode, GateState
from feedback_loop.engine.optimizer import OptimizerConfig, OptimizerState
from feedback_loop.engine.privacy import PrivacyConfig
from feedback_loop.engine.variance import VarianceTracker

__all__ = [
    "AdaptiveEngine",
    "GateConfig",
    "GateMode",
    "GateState",
    "OptimizerConfig",
    "OptimizerState",
    "PrivacyConfig",
    "VarianceTracker",
]
