"""
配置常量定义

Frobenius Labs 的所有默认值与固定字符串集中在这里，
Settings 中的字段以这些常量为默认值，可以被环境变量、配置文件和命令行参数覆盖。
"""

import os
from typing import Any, Dict


class Constants:
    """系统常量定义"""

    # ========== 文件路径相关常量 ==========

    SCENARIO_CONFIGS_DIR_NAME = "scenario_configs"
    SCENARIO_REGISTRY_FILE_NAME = "verification_registry.json"
    REPORTS_DIR_NAME = "reports"
    DEFAULT_CONFIG_FILE_NAME = "frobenius.conf"

    # ========== 问题参数默认值 ==========

    DEFAULT_N = 4
    DEFAULT_P = 3
    DEFAULT_R = 1
    DEFAULT_J = 1
    DEFAULT_K = 1
    DEFAULT_MAX_DEGREE = 12
    DEFAULT_L_MAX = 3
    DEFAULT_THREADS = os.cpu_count() or 1

    MIN_N = 4
    MIN_P = 3

    # ========== 输出相关常量 ==========

    OUTPUT_FORMATS = ("text", "json")
    DEFAULT_OUTPUT_FORMAT = "text"
    DEFAULT_LOG_LEVEL = "INFO"
    JSON_INDENT = 2

    # ========== 求解器预算 ==========

    DEFAULT_SOLVER_NODE_LIMIT = 200000
    DEFAULT_SOLVER_SOLUTION_LIMIT = 64

    # ========== 退出码 ==========

    EXIT_OK = 0
    EXIT_USAGE = 1
    EXIT_INCONSISTENT = 2

    # ========== 环境变量名 ==========

    ENV_THREADS = "FFRT_THREADS"
    ENV_MAX_DEGREE = "FFRT_MAX_DEGREE"
    ENV_LOG_LEVEL = "FFRT_LOG_LEVEL"
    ENV_OUTPUT_FORMAT = "FFRT_OUTPUT_FORMAT"
    ENV_CONFIG_FILE = "FFRT_CONFIG"

    # ========== 日志器名称 ==========

    LOG_PREFIX_FACTORY = "Factory"
    LOG_PREFIX_SUITE = "Suite"
    LOG_PREFIX_ORACLE = "Oracle"
    LOG_PREFIX_SOLVER = "Solver"

    # ========== 报告用语 ==========

    HYPOTHESIS_NOTE = "outside theorem hypotheses: p < max{n-2,3}"
    FLAG_NONZERO = "nonzero"
    FLAG_POSSIBLE = "possible"
    TWIST_UNKNOWN = "unknown"
    MULTIPLICITY_UNKNOWN_POSITIVE = "unknown-positive"
    MULTIPLICITY_UNKNOWN = "unknown"

    # ========== 错误消息模板 ==========

    ERROR_PRIME_TEMPLATE = "p={p} 不是素数"
    ERROR_SMALL_P_TEMPLATE = "需要 p ≥ max{{n−2,3}} = {bound}，当前 p={p}（可用 --allow-small-p 放宽）"
    ERROR_RANGE_TEMPLATE = "需要 {lo} ≤ {name} ≤ {hi}，当前 {name}={value}"

    @classmethod
    def get_all_constants(cls) -> Dict[str, Any]:
        """获取所有常量"""
        constants = {}
        for key in dir(cls):
            if not key.startswith('_') and not callable(getattr(cls, key)):
                constants[key] = getattr(cls, key)
        return constants

    @classmethod
    def get_env_names(cls) -> Dict[str, str]:
        """获取可识别的环境变量名"""
        return {key: value for key, value in cls.get_all_constants().items() if key.startswith("ENV_")}
