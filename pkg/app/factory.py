"""纯工厂模式 - 直接创建系统组件"""
from typing import Dict, List

from config.constants import Constants
from config.settings import Settings
from algorithm.summand_catalog import SummandInstance, catalog_R, catalog_S_Gr, pushforward_catalog
from algorithm.verifier import FrobeniusVerifier
from infrastructure.oracle.polynomial_oracle import PolynomialOracle
from infrastructure.storage.report_storage import FileReportStorage
from utils.simple_logger import get_logger

logger = get_logger(Constants.LOG_PREFIX_FACTORY)


class FrobeniusLabsFactory:
    """Frobenius Labs 工厂 - 纯工厂模式实现"""

    @staticmethod
    def create_oracle(config: Settings) -> PolynomialOracle:
        """创建不变量计算器"""
        return PolynomialOracle(threads=config.threads)

    @staticmethod
    def create_report_storage(config: Settings) -> FileReportStorage:
        """创建报告存储"""
        return FileReportStorage(report_dir=config.report_dir)

    @staticmethod
    def create_catalogs(config: Settings) -> Dict[str, List[SummandInstance]]:
        """按配置的 (n, p, r) 生成三类目录，键与 `catalog` 子命令一致"""
        config.validate(critical_only=True)
        n, p, r = config.n, config.p, config.r
        return {
            "s-invariants": catalog_S_Gr(n, r, p, config.allow_small_p),
            "r-module": catalog_R(n, r, p, config.allow_small_p),
            "pushforward": pushforward_catalog(n, p, r),
        }

    @staticmethod
    def create_verifier(config: Settings, oracle=None) -> FrobeniusVerifier:
        """
        创建验证器

        :param config: 配置对象
        :param oracle: 自定义计算器，为None时按配置创建
        :return: FrobeniusVerifier实例
        """
        config.validate()

        if oracle is None:
            oracle = FrobeniusLabsFactory.create_oracle(config)

        verifier = FrobeniusVerifier(
            oracle=oracle,
            registry_path=config.scenario_registry_path,
            node_limit=config.solver_node_limit,
            solution_limit=config.solver_solution_limit,
            allow_small_p=config.allow_small_p,
        )

        logger.info(
            f"验证器已创建 | 线程: {config.threads} | 预算: {config.solver_node_limit} 节点"
        )
        if not config.within_hypotheses:
            logger.warning(Constants.HYPOTHESIS_NOTE)
        return verifier
