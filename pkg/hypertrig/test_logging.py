import logging

import pytest
import structlog

from hypertrig.logging import configure_logging, get_logging_level


@pytest.mark.parametrize(
    "level,expected",
    [("info", logging.INFO), ("Warn", logging.WARN), ("DEBUG", logging.DEBUG)],
)
def test_get_logging_level(level: str, expected: int) -> None:
    assert get_logging_level(level) == expected


def test_get_logging_level_unknown() -> None:
    with pytest.raises(KeyError):
        get_logging_level("chatty")


def test_configure_logging(capsys: pytest.CaptureFixture) -> None:
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    try:
        configure_logging(logging.INFO)
        structlog.get_logger("hypertrig.test").info("classified", case="T1_I", lam=0.5)
        structlog.get_logger("hypertrig.test").debug("dropped")
    finally:
        root.handlers[:] = handlers
        root.setLevel(level)
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "INFO event='classified' case='T1_I' lam=0.5" in captured.err
    assert "dropped" not in captured.err
