import copy
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union, cast

from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from feedback_loop import PRESETS_DIR, RESULTS_DIR
from feedback_loop.baselines.registry import AgentConfig
from feedback_loop.core.exceptions import ConfigurationError, check
from feedback_loop.engine.gate import GateConfig
from feedback_loop.engine.optimizer import OptimizerConfig
from feedback_loop.engine.privacy import PrivacyConfig
from feedback_loop.environments.config import EnvConfig
from feedback_loop.tools.serialization import load_yaml, read_dotted_config

PRESETS: List[str] = sorted(path.stem for path in PRESETS_DIR.glob("*.yaml"))
"""Names accepted by `--preset`
"""


@dataclass
class ExperimentConfig:
    """Everything that determines the outputs of an experiment, together with the base seed."""

    env: EnvConfig = field(default_factory=EnvConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    gate: GateConfig = field(default_factory=GateConfig)
    privacy: PrivacyConfig = field(default_factory=PrivacyConfig)
    steps: int = 50_000
    """Horizon T of every replica
    """
    replicas: int = 20
    seed: int = 0
    """Base seed. Replica r runs with seed `seed + r`
    """
    delay: int = 0
    """Steps between generating a feedback event and delivering it to the agent
    """
    output: str = str(RESULTS_DIR)
    """Directory the result CSVs are written to
    """
    n_jobs: int = 1
    """Parallel workers over replicas, -1 for all cores
    """
    top_k: int = 10
    """Cut-off of the per-step ranking metrics, clipped to the number of actions
    """

    @property
    def output_dir(self) -> Path:
        return Path(self.output)

    @property
    def k(self) -> int:
        return min(self.top_k, self.env.resolved_num_actions)

    @property
    def resolved_privacy(self) -> PrivacyConfig:
        """Privacy section with an unset horizon read as `steps`, so that it follows later changes
        of `steps`.
        """
        if self.privacy.horizon is not None:
            return self.privacy
        return replace(self.privacy, horizon=self.steps)

    def validate(self) -> None:
        """Validate every section. The environment seed is rejected because replicas seed the
        simulator from `seed`.
        """
        check(self.steps > 0, "steps", f"must be > 0, got {self.steps}")
        check(self.replicas > 0, "replicas", f"must be > 0, got {self.replicas}")
        check(self.delay >= 0, "delay", f"must be >= 0, got {self.delay}")
        check(self.n_jobs != 0, "n_jobs", "must be non-zero")
        check(self.top_k >= 1, "top_k", f"must be >= 1, got {self.top_k}")

        check(
            self.env.seed == EnvConfig.seed,
            "env.seed",
            f"is not used by experiments, set `seed` instead (got {self.env.seed})",
        )

        for section in ("env", "agent", "optimizer", "gate", "privacy"):
            try:
                getattr(self, section).validate()
            except ConfigurationError as e:
                raise e.with_prefix(section)


def _merge(base: DictConfig, other: DictConfig, source: str) -> DictConfig:
    try:
        return cast(DictConfig, OmegaConf.merge(base, other))
    except OmegaConfBaseException as e:
        key = getattr(e, "full_key", None) or source
        raise ConfigurationError(str(key), f"invalid value in {source}: {e}") from e


def _update(cfg: DictConfig, updates: Dict[str, Any]) -> None:
    for key, value in updates.items():
        try:
            OmegaConf.update(cfg, key, value, merge=False)
        except OmegaConfBaseException as e:
            raise ConfigurationError(key, f"cannot be set to `{value}`: {e}") from e


def build_config(
    preset: Optional[str] = None,
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """Materialise an ExperimentConfig from, in increasing priority, the dataclass defaults, a
    preset YAML, a dotted-key config file and explicit overrides keyed by dotted names. Overrides
    set to None are ignored. Unknown keys and ill-typed values raise a ConfigurationError that
    names the key.
    """
    cfg = OmegaConf.structured(ExperimentConfig)
    OmegaConf.set_struct(cfg, True)

    if preset is not None:
        check(preset in PRESETS, "preset", f"must be one of {PRESETS}, got `{preset}`")
        cfg = _merge(cfg, load_yaml(PRESETS_DIR / f"{preset}.yaml"), f"preset `{preset}`")
    if config_path is not None:
        try:
            dotted = read_dotted_config(config_path)
        except (FileNotFoundError, ValueError) as e:
            raise ConfigurationError("config", str(e)) from e
        cfg = _merge(cfg, dotted, str(config_path))
    if overrides:
        _update(cfg, {key: value for key, value in overrides.items() if value is not None})

    config = cast(ExperimentConfig, OmegaConf.to_object(cfg))
    config.validate()
    return config


def with_updates(config: ExperimentConfig, updates: Dict[str, Any]) -> ExperimentConfig:
    """Copy of `config` with the dotted keys of `updates` replaced, e.g. `{"gate.mode": "always"}`."""
    cfg = OmegaConf.structured(copy.deepcopy(config))
    OmegaConf.set_struct(cfg, True)
    _update(cfg, updates)
    updated = cast(ExperimentConfig, OmegaConf.to_object(cfg))
    updated.validate()
    return updated
