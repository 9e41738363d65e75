"""验证器接口定义"""
from abc import ABC, abstractmethod
from typing import Dict, List


class IVerifier(ABC):
    """验证器接口 - 负责把暴力计算结果与分解目录对账"""

    @abstractmethod
    def verify(self, scenario: str, params: Dict, max_degree: int):
        """
        验证一个场景

        :param scenario: 场景名，s-invariants / tjs / kjk / b1-predictor
        :param params: 场景参数 (n, p, r, j, k)
        :param max_degree: 截断次数 D
        :return: VerificationReport
        """
        pass

    @abstractmethod
    def run_suite(self) -> bool:
        """
        运行场景注册表中的全部用例

        :return: 是否全部一致
        """
        pass

    @abstractmethod
    def save_scenario(self, scenario_data: Dict):
        """
        将场景加入注册表

        :param scenario_data: 场景数据，包含 scenario, params, max_degree
        """
        pass

    @abstractmethod
    def load_scenarios(self) -> List[Dict]:
        """
        加载所有已登记的场景

        :return: 场景列表
        """
        pass
