"""报告存储接口定义"""
from abc import ABC, abstractmethod
from typing import Dict, Optional


class IReportStorage(ABC):
    """报告存储接口 - 负责报告的序列化与读写"""

    @abstractmethod
    def to_json(self, report: Dict) -> str:
        """
        序列化为 JSON

        :param report: 报告字典
        :return: JSON 文本
        """
        pass

    @abstractmethod
    def to_text(self, report: Dict) -> str:
        """
        序列化为人可读的表格

        :param report: 报告字典
        :return: 文本
        """
        pass

    @abstractmethod
    def save_report(self, report: Dict, path: Optional[str], output_format: str) -> str:
        """
        写出报告

        :param report: 报告字典
        :param path: 输出路径，None 表示 stdout
        :param output_format: text 或 json
        :return: 写出的文本
        """
        pass

    @abstractmethod
    def load_report(self, path: str) -> Dict:
        """
        读取 JSON 报告

        :param path: 报告路径
        :return: 报告字典
        """
        pass
