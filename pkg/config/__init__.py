"""配置模块 - 导出默认配置与常用参数"""
from config.constants import Constants
from config.settings import Settings

# 加载默认配置（仅环境变量层，命令行与配置文件由 Settings.resolve 合并）
_settings = Settings.load_from_env()

PROJECT_ROOT = _settings.project_root
DEFAULT_MAX_DEGREE = _settings.max_degree
DEFAULT_THREADS = _settings.threads

__all__ = [
    'Settings',
    'Constants',
    'PROJECT_ROOT',
    'DEFAULT_MAX_DEGREE',
    'DEFAULT_THREADS',
]
