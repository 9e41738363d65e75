"""不变量计算器接口定义"""
from abc import ABC, abstractmethod
from typing import Dict, Sequence


class IInvariantOracle(ABC):
    """不变量计算器接口 - 负责截断到给定次数的精确分次特征标"""

    @abstractmethod
    def graded_invariants(self, target, max_degree: int):
        """
        计算目标对象的 Frobenius 核不变量

        :param target: InvariantTarget，S、T(j)⊗S 或 K_{jk}
        :param max_degree: 截断次数 D
        :return: GradedTarget，按次数的不变量特征标与极小生成元特征标
        """
        pass

    @abstractmethod
    def b1_cohomology(
        self,
        n: int,
        p: int,
        j: int,
        k: int,
        t: Sequence[int],
        degrees: Sequence[int],
        tate: bool = False
    ) -> Dict:
        """
        计算 C_{jk}^{(t)} 的 B₁-上同调

        :param t: [0, p−1]^n 中的元组
        :param degrees: 要计算的上同调次数
        :param tate: 是否计算 Tate 上同调
        :return: 次数 → 权特征标（权已除以 p）
        """
        pass
