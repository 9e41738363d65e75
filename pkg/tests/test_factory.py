"""工厂与服务注册表测试"""
import pytest

from algorithm.verifier import FrobeniusVerifier
from app.factory import FrobeniusLabsFactory
from app.service_registry import ServiceRegistry, create_test_registry, register_custom_oracle
from config.settings import Settings
from infrastructure.oracle.polynomial_oracle import PolynomialOracle
from infrastructure.storage.report_storage import FileReportStorage
from interface.oracle import IInvariantOracle
from utils.errors import HypothesisError


def test_create_components(settings):
    assert isinstance(FrobeniusLabsFactory.create_oracle(settings), PolynomialOracle)
    storage = FrobeniusLabsFactory.create_report_storage(settings)
    assert isinstance(storage, FileReportStorage)
    assert storage.report_dir == settings.report_dir


def test_create_catalogs(settings):
    catalogs = FrobeniusLabsFactory.create_catalogs(settings)
    assert set(catalogs) == {"s-invariants", "r-module", "pushforward"}
    assert len(catalogs["s-invariants"]) == len(catalogs["r-module"]) == 3


def test_create_verifier_checks_hypotheses(tmp_path):
    with pytest.raises(HypothesisError):
        FrobeniusLabsFactory.create_verifier(Settings(project_root=str(tmp_path), n=6, p=3))


def test_default_registry_shares_oracle(settings):
    registry = ServiceRegistry.create_default_registry(settings)
    assert registry.get('config') is settings
    first = registry.get('verifier')
    second = registry.get('verifier')
    assert isinstance(first, FrobeniusVerifier)
    assert first is not second
    assert first.oracle is second.oracle is registry.get('oracle')
    assert first.registry_path == settings.scenario_registry_path


def test_registry_basics(settings):
    registry = ServiceRegistry()
    assert not registry.has('oracle')
    with pytest.raises(KeyError):
        registry.get('oracle')
    register_custom_oracle(registry, PolynomialOracle, threads=2)
    assert registry.has('oracle')
    registry.clear()
    assert not registry.has('oracle')


def test_test_registry_uses_mocks(settings):
    registry = create_test_registry(settings)
    oracle = registry.get('oracle')
    assert isinstance(oracle, IInvariantOracle)
    assert not isinstance(oracle, PolynomialOracle)
