#!/usr/bin/env python3
"""
Frobenius Labs 轻量级日志工具
计算过程的日志统一写到stderr，stdout只留给报告输出
"""

import sys
import time
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Optional, Union

try:
    import colorama

    colorama.just_fix_windows_console()
except ImportError:  # pragma: no cover - colorama为可选依赖
    colorama = None


class LogLevel(Enum):
    """日志级别"""
    DEBUG = 0
    INFO = 1
    SUCCESS = 2
    WARNING = 3
    ERROR = 4
    CRITICAL = 5

    @classmethod
    def parse(cls, value: Union[str, "LogLevel"]) -> "LogLevel":
        """从字符串解析日志级别（大小写不敏感）"""
        if isinstance(value, LogLevel):
            return value
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            valid = ", ".join(level.name for level in cls)
            raise ValueError(f"未知日志级别: {value}（可选: {valid}）")


class QuickLogger:
    """
    快速日志器

    特点:
    - 一行代码记录日志，支持临时上下文 key=value
    - 只在终端中着色
    - 块计数、求解统计等细节用DEBUG级别，场景横幅用section
    """

    COLORS = {
        'DEBUG': '\033[90m',
        'INFO': '\033[94m',
        'SUCCESS': '\033[92m',
        'WARNING': '\033[93m',
        'ERROR': '\033[91m',
        'CRITICAL': '\033[41m',
        'RESET': '\033[0m',
    }

    ICONS = {
        'DEBUG': '🔍',
        'INFO': 'ℹ️',
        'SUCCESS': '✅',
        'WARNING': '⚠️',
        'ERROR': '❌',
        'CRITICAL': '💥',
    }

    def __init__(self, name: str = "Frobenius", level: LogLevel = LogLevel.INFO, stream=None):
        """
        初始化日志器

        :param name: 日志器名称，会显示在日志中
        :param level: 日志级别，低于此级别的日志不会被记录
        :param stream: 输出流，默认sys.stderr（调用时解析，便于测试捕获）
        """
        self.name = name
        self.level = level
        self._stream = stream
        self._context: Dict[str, Any] = {}

    @property
    def stream(self):
        return self._stream if self._stream is not None else sys.stderr

    def set_level(self, level: Union[str, LogLevel]) -> "QuickLogger":
        self.level = LogLevel.parse(level)
        return self

    def set_context(self, **kwargs):
        """设置上下文信息"""
        self._context.update(kwargs)
        return self

    def clear_context(self):
        """清空上下文信息"""
        self._context.clear()
        return self

    def _should_log(self, level: LogLevel) -> bool:
        return level.value >= self.level.value

    def _format_message(self, level: LogLevel, message: str, extra: Optional[Dict[str, Any]] = None) -> str:
        """格式化日志消息: [时间] [名称] 图标 消息 (k=v ...)"""
        timestamp = datetime.now().strftime("%H:%M:%S")
        level_name = level.name
        icon = self.ICONS.get(level_name, '')
        color = self.COLORS.get(level_name, self.COLORS['RESET'])

        parts = [f"[{timestamp}]", f"[{self.name}]", f"{icon} {message}"]

        context = dict(self._context)
        if extra:
            context.update(extra)
        if context:
            context_str = " ".join(f"{k}={v}" for k, v in context.items())
            parts.append(f"({context_str})")

        formatted = " ".join(parts)
        isatty = getattr(self.stream, "isatty", None)
        if color and isatty is not None and isatty():
            return f"{color}{formatted}{self.COLORS['RESET']}"
        return formatted

    def _log(self, level: LogLevel, message: str, **kwargs):
        if not self._should_log(level):
            return
        formatted = self._format_message(level, message, kwargs)
        print(formatted, file=self.stream)
        self.stream.flush()

    def debug(self, message: str, **kwargs):
        self._log(LogLevel.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs):
        self._log(LogLevel.INFO, message, **kwargs)

    def success(self, message: str, **kwargs):
        self._log(LogLevel.SUCCESS, message, **kwargs)

    def warning(self, message: str, **kwargs):
        self._log(LogLevel.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs):
        self._log(LogLevel.ERROR, message, **kwargs)

    def critical(self, message: str, **kwargs):
        self._log(LogLevel.CRITICAL, message, **kwargs)

    def section(self, title: str):
        """记录一个章节标题"""
        if self._should_log(LogLevel.INFO):
            print("\n" + "=" * 60, file=self.stream)
            print(f"📋 {title}", file=self.stream)
            print("=" * 60, file=self.stream)

    def step(self, step_num: int, total_steps: int, message: str):
        if self._should_log(LogLevel.INFO):
            self.info(f"[{step_num}/{total_steps}] {message}")

    def progress(self, current: int, total: int, message: str = ""):
        """记录进度条（total为0时视为完成）"""
        if not self._should_log(LogLevel.INFO):
            return
        ratio = current / total if total else 1.0
        bar_length = 20
        filled = int(bar_length * ratio)
        bar = "█" * filled + "░" * (bar_length - filled)
        progress_msg = f"{bar} {ratio * 100:.1f}% ({current}/{total})"
        if message:
            progress_msg = f"{message} {progress_msg}"
        self.info(progress_msg)

    def timed(self, label: str):
        """计时上下文: with logger.timed("rank"): ..."""
        return _Timer(self, label)


class _Timer:
    def __init__(self, logger: QuickLogger, label: str):
        self.logger = logger
        self.label = label
        self.elapsed_ms = 0

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed_ms = int((time.perf_counter() - self._start) * 1000)
        self.logger.debug(f"{self.label} 完成", elapsed_ms=self.elapsed_ms)
        return False


_loggers: Dict[str, QuickLogger] = {}
_global_level = LogLevel.INFO


def get_logger(name: str) -> QuickLogger:
    """获取指定名称的日志器（同名复用，级别跟随全局设置）"""
    logger = _loggers.get(name)
    if logger is None:
        logger = QuickLogger(name, level=_global_level)
        _loggers[name] = logger
    return logger


def set_global_level(level: Union[str, LogLevel]) -> LogLevel:
    """统一调整所有日志器的级别（CLI根据 --log-level / FFRT_LOG_LEVEL 调用）"""
    global _global_level
    _global_level = LogLevel.parse(level)
    for logger in _loggers.values():
        logger.level = _global_level
    return _global_level


_default_logger = get_logger("Frobenius")


def debug(message: str, **kwargs):
    _default_logger.debug(message, **kwargs)


def info(message: str, **kwargs):
    _default_logger.info(message, **kwargs)


def success(message: str, **kwargs):
    _default_logger.success(message, **kwargs)


def warning(message: str, **kwargs):
    _default_logger.warning(message, **kwargs)


def error(message: str, **kwargs):
    _default_logger.error(message, **kwargs)


def section(title: str):
    _default_logger.section(title)
