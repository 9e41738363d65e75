"""日志工具测试"""
import io

import pytest

from utils.simple_logger import LogLevel, QuickLogger, get_logger, set_global_level


def test_parse_levels():
    assert LogLevel.parse("debug") is LogLevel.DEBUG
    assert LogLevel.parse(LogLevel.ERROR) is LogLevel.ERROR
    with pytest.raises(ValueError):
        LogLevel.parse("loud")


def test_format_with_context():
    stream = io.StringIO()
    logger = QuickLogger("Oracle", stream=stream)
    logger.set_context(n=4).info("块计数", blocks=12)
    line = stream.getvalue().strip()
    assert "[Oracle]" in line
    assert "块计数" in line
    assert line.endswith("(n=4 blocks=12)")
    assert "\033[" not in line


def test_level_filtering():
    stream = io.StringIO()
    logger = QuickLogger("Solver", level=LogLevel.WARNING, stream=stream)
    logger.info("hidden")
    logger.debug("hidden")
    logger.error("shown")
    assert stream.getvalue().count("\n") == 1


def test_timer_reports_elapsed():
    stream = io.StringIO()
    logger = QuickLogger("Timer", level=LogLevel.DEBUG, stream=stream)
    with logger.timed("rank") as timer:
        pass
    assert timer.elapsed_ms >= 0
    assert "rank 完成" in stream.getvalue()


def test_global_level_follows_settings():
    logger = get_logger("GlobalLevelProbe")
    try:
        set_global_level("ERROR")
        assert logger.level is LogLevel.ERROR
        assert get_logger("GlobalLevelProbe") is logger
    finally:
        set_global_level("INFO")
