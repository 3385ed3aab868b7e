"""Captures information about the runtime environment for liebi."""

import sys
from os import environ as env

from loguru import logger

# Constants for environment variables which configure runtime state.
LIEBI_DEBUG_MODE_ENV = "LIEBI_DEBUG_MODE"
LIEBI_MAX_N_ENV = "LIEBI_MAX_N"
LIEBI_CROSS_CHECKS_ENV = "LIEBI_CROSS_CHECKS"

# Largest sl(n) served by the catalog unless overridden.
DEFAULT_MAX_N = 4

# Singleton to store our RuntimeEnvironment instance. See get_runtime_environment().
_runtime_environment = None


def _env_flag(name: str, default: bool) -> bool:
    value = env.get(name)
    if value is None or not value.strip():
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


class RuntimeEnvironment:
    """Information about the runtime environment for liebi.

    Note: You should not need to create one of these on your own. See
    `get_runtime_environment`.
    """

    def __init__(self):
        """Determine the current runtime environment."""
        # Debug mode makes liebi log intermediate system sizes and ranks.
        self.debug_mode = _env_flag(LIEBI_DEBUG_MODE_ENV, default=False)

        # Internal cross-checks re-verify witnesses. They never change a verdict,
        # they only abort on inconsistency.
        self.cross_checks = _env_flag(LIEBI_CROSS_CHECKS_ENV, default=True)

        max_n = env.get(LIEBI_MAX_N_ENV, "")
        try:
            self.max_n = int(max_n) if max_n.strip() else DEFAULT_MAX_N
        except ValueError as ve:
            raise ValueError(
                f"{LIEBI_MAX_N_ENV} must be an integer, got {max_n!r}",
            ) from ve
        if self.max_n < 2:
            raise ValueError(f"{LIEBI_MAX_N_ENV} must be at least 2, got {self.max_n}")

    def override(
        self,
        debug_mode: bool | None = None,
        max_n: int | None = None,
    ) -> None:
        """Apply command line overrides on top of the environment."""
        if debug_mode:
            self.debug_mode = True
        if max_n is not None:
            if max_n < 2:
                raise ValueError(f"max_n must be at least 2, got {max_n}")
            self.max_n = max_n


def get_runtime_environment() -> RuntimeEnvironment:
    """Fetch the `RuntimeEnvironment` global.

    This is created on demand and reuses existing instances.
    """
    global _runtime_environment
    if not _runtime_environment:
        _runtime_environment = RuntimeEnvironment()
    return _runtime_environment


def reset_runtime_environment() -> None:
    """Forget the cached `RuntimeEnvironment` (e.g., after changing variables)."""
    global _runtime_environment
    _runtime_environment = None


def configure_logging(debug_mode: bool | None = None) -> None:
    """Route loguru output to stderr at a level matching the runtime environment."""
    if debug_mode is None:
        debug_mode = get_runtime_environment().debug_mode
    logger.enable("liebi")
    logger.remove()
    logger.add(
        sys.stderr,
        level="DEBUG" if debug_mode else "WARNING",
        diagnose=debug_mode,
        backtrace=debug_mode,
    )
