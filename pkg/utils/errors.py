"""异常层次结构

所有面向用户的错误都从 FrobeniusLabsError 派生，消息中直接引用被违反的约束。
同时继承相应的内置异常，调用方按 ValueError / RuntimeError 捕获也能工作。
"""


class FrobeniusLabsError(Exception):
    """项目异常基类"""


class InvalidModulusError(FrobeniusLabsError, ValueError):
    """模数不是素数"""

    def __init__(self, p: int):
        self.p = p
        super().__init__(f"模数必须是素数: p={p}")


class HypothesisError(FrobeniusLabsError, ValueError):
    """参数违反前提条件，例如 p ≥ max{n−2,3} 或 1 ≤ j ≤ n−3"""


class NotTiltingCharacterError(FrobeniusLabsError, ValueError):
    """按最高权剥离时出现负重数"""


class GoodFiltrationError(FrobeniusLabsError, ValueError):
    """χ(0) 的系数为负，输入不可能有好滤过"""


class AsymmetricCharacterError(FrobeniusLabsError, ValueError):
    """特征标在 w ↦ −w 下不对称"""


class OracleConsistencyError(FrobeniusLabsError, RuntimeError):
    """暴力计算的内部一致性检查失败（等变解不唯一、正合性、分裂失败、f^p ≠ 0 等）"""


class ConfigurationError(FrobeniusLabsError, ValueError):
    """配置文件或配置值无效"""


class ReportWriteError(FrobeniusLabsError, OSError):
    """报告无法写入目标路径"""


class UnknownSummandKindError(FrobeniusLabsError, KeyError):
    """未知的直和项类型"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "未知的直和项类型"
