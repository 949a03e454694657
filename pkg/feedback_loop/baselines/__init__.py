from feedback_loop.baselines.batch import BatchRefitAgent, make_periodic, make_static_profile
from feedback_loop.baselines.context_static import ContextAwareStaticAgent, make_context_aware_static
from feedback_loop.baselines.oracle import OracleAgent
from feedback_loop.baselines.registry import AGENT_KINDS, AgentConfig, AgentKind, build_agent
from feedback_loop.baselines.simple_online import make_simple_online

__all__ = [
    "AGENT_KINDS",
    "AgentConfig",
    "AgentKind",
    "BatchRefitAgent",
    "ContextAwareStaticAgent",
    "OracleAgent",
    "build_agent",
    "make_context_aware_static",
    "make_periodic",
    "make_simple_online",
    "make_static_profile",
]
