"""
Run configuration: resource caps and worker count.
"""

import logging
import os
from dataclasses import dataclass, replace
from typing import Any, Callable, Optional

from pmhprism.errors import InvalidParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Per-run resource settings."""

    timeout_s: float = 300.0
    matching_cap: int = 10**7
    jobs: int = 1
    slow_instance_s: float = 2.0

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise InvalidParameterError(
                f"timeout_s must be positive, got {self.timeout_s}"
            )
        if self.matching_cap < 1:
            raise InvalidParameterError(
                f"matching_cap must be at least 1, got {self.matching_cap}"
            )
        if self.jobs < 1:
            raise InvalidParameterError(f"jobs must be at least 1, got {self.jobs}")

    def with_overrides(
        self,
        timeout_s: Optional[float] = None,
        matching_cap: Optional[int] = None,
        jobs: Optional[int] = None,
    ) -> "RunConfig":
        """Copy with the non-None values replaced (CLI flags win over env)."""
        changes = {}
        if timeout_s is not None:
            changes["timeout_s"] = timeout_s
        if matching_cap is not None:
            changes["matching_cap"] = matching_cap
        if jobs is not None:
            changes["jobs"] = jobs
        return replace(self, **changes) if changes else self


def _env_number(name: str, cast: Callable[[str], Any]) -> Any:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return cast(raw)
    except ValueError:
        raise InvalidParameterError(f"{name} must be a number, got {raw!r}") from None


def create_config_from_env() -> RunConfig:
    """
    Create a RunConfig from environment variables.

    Reads PMHPRISM_TIMEOUT_S, PMHPRISM_MATCHING_CAP and PMHPRISM_JOBS;
    unset variables keep their defaults.
    """
    config = RunConfig().with_overrides(
        timeout_s=_env_number("PMHPRISM_TIMEOUT_S", float),
        matching_cap=_env_number("PMHPRISM_MATCHING_CAP", int),
        jobs=_env_number("PMHPRISM_JOBS", int),
    )
    logger.debug(f"Run configuration: {config}")
    return config


# Global config instance
_run_config: Optional[RunConfig] = None


def get_config() -> RunConfig:
    """Get the global run configuration."""
    global _run_config
    if _run_config is None:
        _run_config = create_config_from_env()
    return _run_config


def reset_config() -> None:
    """Drop the cached configuration so the next get_config() re-reads the env."""
    global _run_config
    _run_config = None
