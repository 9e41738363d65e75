"""配置管理类"""
import json
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Dict, Optional

from dotenv import load_dotenv
from sympy import isprime

from config.constants import Constants
from utils.errors import ConfigurationError, HypothesisError


def _parse_bool(value: str) -> bool:
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"无法解析为布尔值: {value}")


def _parse_optional_str(value: str) -> Optional[str]:
    text = str(value).strip()
    return text or None


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} 必须是整数，当前值: {raw}")


# 配置文件与命令行可以设置的键及其类型转换
_FIELD_CASTS: Dict[str, Callable[[str], Any]] = {
    "n": int,
    "p": int,
    "r": int,
    "j": int,
    "k": int,
    "max_degree": int,
    "threads": int,
    "output_format": lambda v: str(v).strip().lower(),
    "output_path": _parse_optional_str,
    "allow_small_p": _parse_bool,
    "log_level": lambda v: str(v).strip().upper(),
    "solver_node_limit": int,
    "solver_solution_limit": int,
}


@dataclass
class Settings:
    """Frobenius Labs 运行配置（同时充当一次命令行运行的 RunConfig）"""

    # ========== 核心路径配置 ==========
    project_root: str
    """项目根目录"""

    # ========== 问题参数 ==========
    n: int = field(default_factory=lambda: Constants.DEFAULT_N)
    """W = V^{⊕n} 中的副本数，n ≥ 4"""
    p: int = field(default_factory=lambda: Constants.DEFAULT_P)
    """特征（素数）"""
    r: int = field(default_factory=lambda: Constants.DEFAULT_R)
    """Frobenius 层级 G_r"""
    j: int = field(default_factory=lambda: Constants.DEFAULT_J)
    """tilting 指标 / K_{jk} 的 j"""
    k: int = field(default_factory=lambda: Constants.DEFAULT_K)
    """K_{jk} 的 k"""
    max_degree: int = field(default_factory=lambda: Constants.DEFAULT_MAX_DEGREE)
    """截断次数 D，所有暴力计算只算到这个次数"""

    # ========== 执行配置 ==========
    threads: int = field(default_factory=lambda: Constants.DEFAULT_THREADS)
    """按 (次数, 权) 块并行的线程数；线程受 GIL 限制，纯 Python 的消元部分不会随线程数加速"""
    solver_node_limit: int = field(default_factory=lambda: Constants.DEFAULT_SOLVER_NODE_LIMIT)
    """重数求解的搜索节点预算"""
    solver_solution_limit: int = field(default_factory=lambda: Constants.DEFAULT_SOLVER_SOLUTION_LIMIT)
    """重数求解最多收集的解个数"""

    # ========== 输出配置 ==========
    output_format: str = field(default_factory=lambda: Constants.DEFAULT_OUTPUT_FORMAT)
    """text 或 json"""
    output_path: Optional[str] = None
    """报告输出路径，None 表示 stdout"""
    log_level: str = field(default_factory=lambda: Constants.DEFAULT_LOG_LEVEL)
    """日志级别"""
    allow_small_p: bool = False
    """允许 p < max{n−2,3}，此时目录项标为 possible"""

    # ========== 计算属性 ==========
    @property
    def scenario_registry_path(self) -> str:
        """场景注册表路径"""
        return os.path.join(
            self.project_root, Constants.SCENARIO_CONFIGS_DIR_NAME, Constants.SCENARIO_REGISTRY_FILE_NAME
        )

    @property
    def report_dir(self) -> str:
        """默认报告目录"""
        return os.path.join(self.project_root, Constants.REPORTS_DIR_NAME)

    @property
    def p_lower_bound(self) -> int:
        """定理前提 p ≥ max{n−2,3}"""
        return max(self.n - 2, Constants.MIN_P)

    @property
    def within_hypotheses(self) -> bool:
        return self.p >= self.p_lower_bound

    @classmethod
    def load_from_env(cls, project_root: Optional[str] = None) -> 'Settings':
        """
        从环境变量加载配置

        :param project_root: 项目根路径，如果为None则自动检测
        :return: Settings实例
        """
        load_dotenv()

        if project_root is None:
            project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

        return cls(
            project_root=project_root,
            max_degree=_env_int(Constants.ENV_MAX_DEGREE, Constants.DEFAULT_MAX_DEGREE),
            threads=_env_int(Constants.ENV_THREADS, Constants.DEFAULT_THREADS),
            output_format=os.getenv(Constants.ENV_OUTPUT_FORMAT, Constants.DEFAULT_OUTPUT_FORMAT).lower(),
            log_level=os.getenv(Constants.ENV_LOG_LEVEL, Constants.DEFAULT_LOG_LEVEL).upper(),
        )

    @staticmethod
    def load_config_file(path: str) -> Dict[str, Any]:
        """
        读取 `key = value` 格式的配置文件

        :param path: 配置文件路径
        :return: 已转换类型的键值字典
        :raises ConfigurationError: 文件缺失、行格式错误或未知键
        """
        if not os.path.exists(path):
            raise ConfigurationError(f"配置文件不存在: {path}")

        values: Dict[str, Any] = {}
        with open(path, "r", encoding="utf-8") as f:
            for line_no, raw in enumerate(f, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigurationError(f"{path}:{line_no}: 缺少 '='，应为 key = value")
                key, value = (part.strip() for part in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in _FIELD_CASTS:
                    raise ConfigurationError(f"{path}:{line_no}: 未知配置项 '{key}'")
                try:
                    values[key] = _FIELD_CASTS[key](value)
                except ValueError as e:
                    raise ConfigurationError(f"{path}:{line_no}: {key} 的值无效: {value} ({e})")
        return values

    @classmethod
    def resolve(
        cls,
        file_values: Optional[Dict[str, Any]] = None,
        cli_values: Optional[Dict[str, Any]] = None,
        project_root: Optional[str] = None,
    ) -> 'Settings':
        """
        合并各层配置，优先级: 命令行 > FFRT_THREADS（仅线程数）> 配置文件 > 默认值

        :param file_values: load_config_file 的结果
        :param cli_values: 命令行参数，值为None表示未给出
        :return: 合并后的Settings
        """
        base = cls.load_from_env(project_root)
        merged: Dict[str, Any] = dict(file_values or {})

        env_threads = os.getenv(Constants.ENV_THREADS)
        if env_threads:
            try:
                merged["threads"] = int(env_threads)
            except ValueError:
                raise ConfigurationError(f"{Constants.ENV_THREADS} 必须是整数，当前值: {env_threads}")

        known = {f.name for f in fields(cls)}
        for key, value in (cli_values or {}).items():
            if value is not None and key in known:
                merged[key] = value
        return replace(base, **merged)

    def validate(self, critical_only: bool = False) -> bool:
        """
        验证配置是否有效

        :param critical_only: 只检查数学前提（p 为素数、n、p 的下界）
        :return: 配置有效时返回True
        :raises HypothesisError: 违反数学前提
        :raises ConfigurationError: 其它配置值无效
        """
        hypothesis_errors = []
        errors = []

        if not isprime(self.p):
            hypothesis_errors.append("❌ " + Constants.ERROR_PRIME_TEMPLATE.format(p=self.p))
        if self.n < Constants.MIN_N:
            hypothesis_errors.append(f"❌ 需要 n ≥ {Constants.MIN_N}，当前 n={self.n}")
        if not self.allow_small_p and self.p < self.p_lower_bound:
            hypothesis_errors.append(
                "❌ " + Constants.ERROR_SMALL_P_TEMPLATE.format(bound=self.p_lower_bound, p=self.p)
            )

        if not critical_only:
            if self.r < 1:
                hypothesis_errors.append(f"❌ 需要 r ≥ 1，当前 r={self.r}")
            if self.max_degree < 0:
                errors.append(f"❌ max_degree 必须 ≥ 0，当前值: {self.max_degree}")
            if self.threads < 1:
                errors.append(f"❌ threads 必须 ≥ 1，当前值: {self.threads}")
            if self.output_format not in Constants.OUTPUT_FORMATS:
                errors.append(
                    f"❌ output_format 必须是 {'/'.join(Constants.OUTPUT_FORMATS)} 之一，当前值: {self.output_format}"
                )
            if self.solver_node_limit < 1 or self.solver_solution_limit < 1:
                errors.append("❌ 求解器预算必须为正")

        all_errors = hypothesis_errors + errors
        if all_errors:
            error_msg = "配置验证失败:\n" + "\n".join(all_errors)
            error_msg += "\n\n💡 快速修复建议:"
            error_msg += "\n1. 检查命令行参数、配置文件和 FFRT_* 环境变量"
            error_msg += "\n2. p 需要是素数且 p ≥ max{n−2,3}，研究小素数时加 --allow-small-p"
            error_msg += "\n3. 参考 README.md 中的参数说明"
            if hypothesis_errors:
                raise HypothesisError(error_msg)
            raise ConfigurationError(error_msg)
        return True

    def validate_critical(self) -> bool:
        """只验证数学前提"""
        return self.validate(critical_only=True)

    def hypothesis_note(self) -> Optional[str]:
        """放宽 p 的下界时写进报告的说明"""
        if self.within_hypotheses:
            return None
        return Constants.HYPOTHESIS_NOTE

    def to_dict(self) -> Dict[str, Any]:
        """将配置转换为字典"""
        return {
            'project_root': self.project_root,
            'n': self.n,
            'p': self.p,
            'r': self.r,
            'j': self.j,
            'k': self.k,
            'max_degree': self.max_degree,
            'threads': self.threads,
            'solver_node_limit': self.solver_node_limit,
            'solver_solution_limit': self.solver_solution_limit,
            'output_format': self.output_format,
            'output_path': self.output_path,
            'log_level': self.log_level,
            'allow_small_p': self.allow_small_p,
            'scenario_registry_path': self.scenario_registry_path,
            'report_dir': self.report_dir,
        }

    def __str__(self) -> str:
        """返回配置的字符串表示"""
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)
