"""验证算法测试"""
import json
from unittest.mock import Mock

import pytest

from algorithm.multiplicity_solver import summand_graded_character
from algorithm.summand_catalog import KIND_TILT_FREE, SummandInstance
from algorithm.verifier import (
    SCENARIO_B1,
    SCENARIO_S,
    VERDICT_CONFIRMED,
    VERDICT_UNDETERMINED,
    VERDICT_UNREACHED,
    FrobeniusVerifier,
    normalize_scenario,
    verify_decomposition,
)
from infrastructure.characters.sl2_characters import WeightCharacter
from infrastructure.oracle.polynomial_oracle import GradedTarget, InvariantTarget, PolynomialOracle
from interface.oracle import IInvariantOracle
from utils.errors import HypothesisError


def _fake_s_oracle(max_degree):
    """S^{G₁} (n=4, p=3) 的截断，只含 T(0) 扭 0 与 T(1) 扭 3"""
    invariants = {}
    for l, twist in ((0, 0), (1, 3)):
        summand = SummandInstance(KIND_TILT_FREE, (l,), 1, twist=twist)
        for d, char in summand_graded_character(summand, 4, 3, max_degree).items():
            invariants[d] = invariants.get(d, WeightCharacter()) + char
    generators = {0: WeightCharacter({0: 1}), 3: WeightCharacter({1: 1, -1: 1})}
    oracle = Mock(spec=IInvariantOracle)
    oracle.graded_invariants.side_effect = lambda target, D: GradedTarget(
        target=target, max_degree=D, invariants=invariants, generators=generators
    )
    return oracle


def test_normalize_scenario():
    assert normalize_scenario("S_Gr") == SCENARIO_S
    assert normalize_scenario("b1-predictor") == SCENARIO_B1
    with pytest.raises(ValueError):
        normalize_scenario("nope")


def test_verify_catalog_with_fake_oracle(registry_path):
    verifier = FrobeniusVerifier(_fake_s_oracle(8), registry_path)
    report = verifier.verify("s-invariants", {"n": 4, "p": 3, "r": 1}, 8)
    assert report.consistent
    assert report.status == "solved"
    verdicts = {e["label"]: e["verdict"] for e in report.entries}
    assert verdicts == {
        "T(0)^Fr⊗S^p": VERDICT_CONFIRMED,
        "T(1)^Fr⊗S^p": VERDICT_CONFIRMED,
        "K_{11}^Fr": VERDICT_UNREACHED,
    }
    t1 = next(e for e in report.entries if e["label"] == "T(1)^Fr⊗S^p")
    assert t1["twist"] == [3]
    data = report.to_dict()
    assert json.loads(json.dumps(data, ensure_ascii=False)) == data


def test_verify_reports_first_failure(registry_path):
    oracle = Mock(spec=IInvariantOracle)
    oracle.graded_invariants.side_effect = lambda target, D: GradedTarget(
        target=target,
        max_degree=D,
        invariants={0: WeightCharacter({2: 1})},
        generators={0: WeightCharacter({2: 1})},
    )
    report = FrobeniusVerifier(oracle, registry_path).verify("s-invariants", {"n": 4, "p": 3}, 2)
    assert not report.consistent
    assert report.first_failure == {"degree": 0, "weight": 2}


def test_verify_decomposition_without_registry():
    report = verify_decomposition(_fake_s_oracle(8), "S_Gr", {"n": 4, "p": 3}, 8)
    assert report.consistent
    assert report.scenario == SCENARIO_S


def test_verify_rejects_small_p(registry_path):
    verifier = FrobeniusVerifier(Mock(spec=IInvariantOracle), registry_path)
    with pytest.raises(HypothesisError):
        verifier.verify("s-invariants", {"n": 6, "p": 3}, 4)


def test_b1_mismatch_is_reported(registry_path):
    oracle = Mock(spec=IInvariantOracle)
    oracle.b1_cohomology.side_effect = lambda n, p, j, k, t, degrees: {
        l: WeightCharacter({99: 1}) for l in degrees
    }
    report = FrobeniusVerifier(oracle, registry_path).verify(
        "b1-predictor", {"n": 4, "p": 3, "j": 1, "k": 1}, 8
    )
    assert not report.consistent
    assert report.status == "mismatched"
    assert report.first_failure["t"] == [0, 0, 0, 0]
    assert report.first_failure["l"] == 1
    assert oracle.b1_cohomology.call_count == 81


def test_registry_save_and_dedup(registry_path):
    verifier = FrobeniusVerifier(Mock(spec=IInvariantOracle), registry_path)
    assert verifier.load_scenarios() == []
    case = {"scenario": "S_Gr", "params": {"n": 4, "p": 3}, "max_degree": 8}
    verifier.save_scenario(case)
    verifier.save_scenario(case)
    stored = verifier.load_scenarios()
    assert len(stored) == 1
    assert stored[0]["scenario"] == SCENARIO_S


def test_run_suite(registry_path):
    verifier = FrobeniusVerifier(_fake_s_oracle(8), registry_path)
    assert verifier.run_suite()
    verifier.save_scenario({
        "name": "fake",
        "scenario": "s-invariants",
        "params": {"n": 4, "p": 3},
        "max_degree": 8,
        "expect": {"confirmed": ["T(0)^Fr⊗S^p", "T(1)^Fr⊗S^p"]},
    })
    assert verifier.run_suite()
    verifier.save_scenario({
        "name": "expects_too_much",
        "scenario": "s-invariants",
        "params": {"n": 4, "p": 3, "r": 1},
        "max_degree": 8,
        "expect": {"confirmed": ["K_{11}^Fr"]},
    })
    assert not verifier.run_suite()


@pytest.mark.slow
def test_b1_predictor_matches_oracle(registry_path):
    """n=4, p=3: 81 个 t 上预测器与直接计算一致，区间公式与并集一致"""
    verifier = FrobeniusVerifier(PolynomialOracle(threads=1), registry_path)
    report = verifier.verify("b1-predictor", {"n": 4, "p": 3, "j": 1, "k": 1}, 8)
    assert report.consistent, report.first_failure


@pytest.mark.slow
def test_s_invariants_desk_scale(registry_path):
    verifier = FrobeniusVerifier(PolynomialOracle(threads=1), registry_path)
    report = verifier.verify("s-invariants", {"n": 4, "p": 3, "r": 1}, 12)
    assert report.consistent
    assert set(report.confirmed_nonzero) == {"T(0)^Fr⊗S^p", "T(1)^Fr⊗S^p"}
    verdicts = {e["label"]: e["verdict"] for e in report.entries}
    assert verdicts["K_{11}^Fr"] == VERDICT_UNDETERMINED


@pytest.mark.slow
def test_s_invariants_second_frobenius(registry_path):
    """S^{G_2} (n=4, p=3) 截断到 14 次与目录相容"""
    verifier = FrobeniusVerifier(PolynomialOracle(threads=1), registry_path)
    report = verifier.verify("s-invariants", {"n": 4, "p": 3, "r": 2}, 14)
    assert report.consistent, report.first_failure


@pytest.mark.slow
@pytest.mark.parametrize("j", [1, 2, 3])
def test_tjs_small_j_desk_scale(registry_path, j):
    verifier = FrobeniusVerifier(PolynomialOracle(threads=1), registry_path)
    report = verifier.verify("tjs", {"n": 4, "p": 3, "j": j}, 12)
    assert report.consistent, report.first_failure
    if j == 1:
        assert {"T(0)^Fr⊗S^p", "T(1)^Fr⊗S^p", "K_{11}^Fr"} <= set(report.confirmed_nonzero)
    else:
        assert report.status == "solved"


def test_invariant_target_description():
    assert InvariantTarget("S", 4, 3, 2).describe() == "S^(G_2)"
