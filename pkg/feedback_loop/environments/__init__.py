from feedback_loop.environments.config import EnvConfig, EnvKind, FatigueConfig
from feedback_loop.environments.simulator import EnvState, UserSimulator

__all__ = ["EnvConfig", "EnvKind", "EnvState", "FatigueConfig", "UserSimulator"]
