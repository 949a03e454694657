from feedback_loop.harness.ablation import ABLATIONS, apply_ablation, run_ablation
from feedback_loop.harness.compare import compare_agents
from feedback_loop.harness.config import PRESETS, ExperimentConfig, build_config, with_updates
from feedback_loop.harness.delay import DelayQueue
from feedback_loop.harness.runner import run_experiment, run_replica, run_replicas

__all__ = [
    "ABLATIONS",
    "PRESETS",
    "DelayQueue",
    "ExperimentConfig",
    "apply_ablation",
    "build_config",
    "compare_agents",
    "run_ablation",
    "run_experiment",
    "run_replica",
    "run_replicas",
    "with_updates",
]
