"""Tests for the runtime environment singleton."""

import pytest
from loguru import logger

from liebi.catalog import manin_triple_sl_n
from liebi.runtime_environment import (
    DEFAULT_MAX_N,
    configure_logging,
    get_runtime_environment,
    reset_runtime_environment,
)


def test_defaults() -> None:
    """Without environment variables, cross-checks are on and debug is off."""
    runtime_env = get_runtime_environment()
    assert not runtime_env.debug_mode
    assert runtime_env.cross_checks
    assert runtime_env.max_n == DEFAULT_MAX_N


def test_singleton() -> None:
    """The environment is created once and reused until reset."""
    first = get_runtime_environment()
    assert get_runtime_environment() is first
    reset_runtime_environment()
    assert get_runtime_environment() is not first


@pytest.mark.parametrize(
    ("value", "expected"),
    [("true", True), ("1", True), ("YES", True), ("false", False), ("", False)],
)
def test_debug_mode_from_environment(
    monkeypatch: pytest.MonkeyPatch,
    value: str,
    expected: bool,
) -> None:
    """`LIEBI_DEBUG_MODE` accepts the usual truthy spellings."""
    monkeypatch.setenv("LIEBI_DEBUG_MODE", value)
    assert get_runtime_environment().debug_mode is expected


def test_cross_checks_can_be_disabled(monkeypatch: pytest.MonkeyPatch) -> None:
    """`LIEBI_CROSS_CHECKS=false` turns cross-checks off."""
    monkeypatch.setenv("LIEBI_CROSS_CHECKS", "false")
    assert not get_runtime_environment().cross_checks


@pytest.mark.parametrize("value", ["four", "1"])
def test_invalid_max_n(monkeypatch: pytest.MonkeyPatch, value: str) -> None:
    """`LIEBI_MAX_N` must be an integer of at least 2."""
    monkeypatch.setenv("LIEBI_MAX_N", value)
    with pytest.raises(ValueError, match="LIEBI_MAX_N"):
        get_runtime_environment()


def test_override() -> None:
    """Command line overrides win over the environment."""
    runtime_env = get_runtime_environment()
    runtime_env.override(debug_mode=True, max_n=3)
    assert runtime_env.debug_mode
    assert runtime_env.max_n == 3
    runtime_env.override(debug_mode=False)
    assert runtime_env.debug_mode
    with pytest.raises(ValueError, match="max_n"):
        runtime_env.override(max_n=1)


def test_configure_logging(capsys: pytest.CaptureFixture[str]) -> None:
    """Debug messages only reach stderr in debug mode."""
    configure_logging(debug_mode=False)
    logger.debug("hidden message")
    assert "hidden message" not in capsys.readouterr().err

    configure_logging(debug_mode=True)
    logger.debug("shown message")
    assert "shown message" in capsys.readouterr().err
    logger.remove()


def test_library_logging_is_off_until_configured() -> None:
    """`liebi` logs nothing until `configure_logging` enables it."""
    messages: list[str] = []
    logger.disable("liebi")
    logger.add(messages.append, level="DEBUG")
    manin_triple_sl_n(2, "su_first")
    assert not any("Built sl(2)" in message for message in messages)

    configure_logging(debug_mode=True)
    logger.add(messages.append, level="DEBUG")
    manin_triple_sl_n(2, "su_first")
    assert any("Built sl(2)" in message for message in messages)
    logger.remove()
