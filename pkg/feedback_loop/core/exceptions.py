from typing import Optional


class ConfigurationError(ValueError):
    """A configuration value is invalid. `key` holds the dotted name of the offending setting,
    e.g. `optimizer.gamma`, so the CLI can report exactly which key to fix.
    """

    def __init__(self, key: str, reason: str) -> None:
        self.key = key
        self.reason = reason
        super().__init__(f"`{key}`: {reason}")

    def with_prefix(self, prefix: Optional[str]) -> "ConfigurationError":
        """Return the same error with `prefix.` prepended to its key."""
        return ConfigurationError(f"{prefix}.{self.key}" if prefix else self.key, self.reason)


def check(condition: bool, key: str, reason: str) -> None:
    """Raise a ConfigurationError for `key` unless `condition` holds."""
    if not condition:
        raise ConfigurationError(key, reason)
