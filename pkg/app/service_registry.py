"""服务注册表 - 计算器、验证器与报告存储的装配"""
from typing import Any, Callable, Dict, List, Optional

from config.settings import Settings
from interface.oracle import IInvariantOracle
from interface.report_storage import IReportStorage
from interface.verifier import IVerifier

# 注册表中的服务名
SERVICE_CONFIG = 'config'
SERVICE_ORACLE = 'oracle'
SERVICE_VERIFIER = 'verifier'
SERVICE_REPORT_STORAGE = 'report_storage'


class ServiceRegistry:
    """按名称提供服务：单例优先，其次调用工厂"""

    def __init__(self):
        self._factories: Dict[str, Callable[..., Any]] = {}
        self._singletons: Dict[str, Any] = {}

    def register_factory(self, name: str, factory: Callable[..., Any]):
        """每次 get 都调用 factory 生成新实例"""
        self._factories[name] = factory

    def register_singleton(self, name: str, instance: Any):
        """同名工厂会被单例遮蔽"""
        self._singletons[name] = instance

    def get(self, name: str, **kwargs) -> Any:
        """
        取出服务

        :param name: 服务名，见 SERVICE_* 常量
        :param kwargs: 仅对工厂生效
        :raises KeyError: 服务未注册，消息列出已注册的名字
        """
        if name in self._singletons:
            return self._singletons[name]
        factory = self._factories.get(name)
        if factory is None:
            raise KeyError(f"服务未注册: {name}（已注册: {', '.join(self.names()) or '无'}）")
        return factory(**kwargs)

    def has(self, name: str) -> bool:
        return name in self._singletons or name in self._factories

    def names(self) -> List[str]:
        return sorted(set(self._singletons) | set(self._factories))

    def clear(self):
        self._factories.clear()
        self._singletons.clear()

    @staticmethod
    def create_default_registry(config: Settings) -> 'ServiceRegistry':
        """
        按配置装配默认服务

        计算器是单例，同一次运行里的各个验证器共享它的结果缓存。
        """
        from app.factory import FrobeniusLabsFactory

        registry = ServiceRegistry()
        registry.register_singleton(SERVICE_CONFIG, config)
        registry.register_singleton(SERVICE_ORACLE, FrobeniusLabsFactory.create_oracle(config))
        registry.register_factory(
            SERVICE_REPORT_STORAGE, lambda: FrobeniusLabsFactory.create_report_storage(config)
        )
        registry.register_factory(
            SERVICE_VERIFIER,
            lambda: FrobeniusLabsFactory.create_verifier(config, oracle=registry.get(SERVICE_ORACLE)),
        )
        return registry


def register_custom_oracle(registry: ServiceRegistry, oracle_class, **kwargs):
    """用另一个 IInvariantOracle 实现替换默认计算器（例如更快的外部实现）"""
    registry.register_singleton(SERVICE_ORACLE, oracle_class(**kwargs))


def create_test_registry(config: Optional[Settings] = None) -> ServiceRegistry:
    """所有服务都换成按接口约束的 Mock"""
    from unittest.mock import Mock

    registry = ServiceRegistry()
    registry.register_singleton(SERVICE_CONFIG, config or Settings.load_from_env())
    registry.register_singleton(SERVICE_ORACLE, Mock(spec=IInvariantOracle))
    registry.register_singleton(SERVICE_VERIFIER, Mock(spec=IVerifier))
    registry.register_singleton(SERVICE_REPORT_STORAGE, Mock(spec=IReportStorage))
    return registry
