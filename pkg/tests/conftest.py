"""测试公共设施"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.settings import Settings  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 需要完整暴力计算的测试")


@pytest.fixture
def settings(tmp_path, monkeypatch):
    """隔离环境变量、项目根目录指向临时目录的配置"""
    for name in ("FFRT_THREADS", "FFRT_MAX_DEGREE", "FFRT_LOG_LEVEL", "FFRT_OUTPUT_FORMAT", "FFRT_CONFIG"):
        monkeypatch.delenv(name, raising=False)
    return Settings(project_root=str(tmp_path), threads=1)


@pytest.fixture
def registry_path(tmp_path):
    return str(tmp_path / "scenario_configs" / "verification_registry.json")
