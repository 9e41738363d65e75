"""重数求解测试：目标由目录项的分次特征标合成"""
import pytest

from algorithm.multiplicity_solver import (
    STATUS_AMBIGUOUS,
    STATUS_INCONCLUSIVE,
    STATUS_INCONSISTENT,
    STATUS_SOLVED,
    least_bottom_degree,
    solve_multiplicities,
    summand_graded_character,
)
from algorithm.summand_catalog import KIND_K, KIND_SHEAF_SYMQ, KIND_TILT_FREE, SummandInstance, catalog_S_Gr
from infrastructure.characters.sl2_characters import WeightCharacter
from utils.errors import UnknownSummandKindError

N, P = 4, 3
T0 = SummandInstance(KIND_TILT_FREE, (0,), 1)
T1 = SummandInstance(KIND_TILT_FREE, (1,), 1)
K11 = SummandInstance(KIND_K, (1, 1), 1)


def _target(parts, max_degree):
    """Σ 带扭直和项的分次特征标"""
    total = {}
    for summand, twist in parts:
        graded = summand_graded_character(summand.with_twist(twist), N, P, max_degree)
        for d, char in graded.items():
            total[d] = total.get(d, WeightCharacter()) + char
    return total


def test_graded_character_of_tilt_free():
    graded = summand_graded_character(T1.with_twist(3), N, P, 7)
    assert sorted(graded) == [3, 6]
    assert graded[3] == {1: 1, -1: 1}
    assert graded[6] == {2: 4, 0: 8, -2: 4}


def test_graded_character_of_K_starts_at_bottom():
    graded = summand_graded_character(K11.with_twist(1), N, P, 13)
    assert sorted(graded) == [10, 13]
    assert graded[10] == {0: 4}


def test_graded_character_requires_twist():
    with pytest.raises(ValueError):
        summand_graded_character(T0, N, P, 5)
    with pytest.raises(UnknownSummandKindError):
        summand_graded_character(SummandInstance(KIND_SHEAF_SYMQ, (0,), 1, twist=0), N, P, 5)


def test_least_bottom_degree():
    assert least_bottom_degree(T0, N, P, 8) == 0
    assert least_bottom_degree(K11, N, P, 9) == 9
    assert least_bottom_degree(K11, N, P, 8) is None


def test_unique_solution():
    D = 8
    target = _target([(T0, 0), (T1, 3)], D)
    result = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P)
    assert result.status == STATUS_SOLVED
    assert result.consistent
    assert result.residual_degrees == []
    assert set(result.confirmed_keys()) == {T0.key, T1.key}
    assert result.solutions[0].entries_by_key() == {T0.key: {0: 1}, T1.key: {3: 1}}


def test_generators_pin_bottom_pieces():
    D = 8
    target = _target([(T0, 0), (T1, 3)], D)
    generators = {0: WeightCharacter({0: 1}), 3: WeightCharacter({1: 1, -1: 1})}
    result = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P, generators=generators)
    assert result.status == STATUS_SOLVED

    wrong = {0: WeightCharacter({0: 1})}
    result = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P, generators=wrong)
    assert result.status == STATUS_INCONSISTENT
    assert result.first_failure[0] == 3


def test_inconsistent_target_reports_first_failure():
    target = {0: WeightCharacter({2: 1})}
    result = solve_multiplicities(target, catalog_S_Gr(N, 1), 2, N, P)
    assert result.status == STATUS_INCONSISTENT
    assert not result.consistent
    assert result.first_failure == (0, 2)
    assert result.residual_degrees == [0]
    assert result.confirmed_keys() == []


def test_bottom_collision_is_ambiguous():
    """K_{11}^Fr 的最低次与 4 个 T(0)^Fr⊗S^p 无法在第 9 次区分"""
    D = 9
    target = _target([(T0, 0), (K11, 0)], D)
    result = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P)
    assert result.status == STATUS_AMBIGUOUS
    assert len(result.solutions) == 2
    assert result.confirmed_keys() == [T0.key]


def test_node_budget():
    D = 9
    target = _target([(T0, 0), (K11, 0)], D)
    result = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P, node_limit=1)
    assert result.status == STATUS_INCONCLUSIVE
    assert result.budget_exhausted
    assert result.confirmed_keys() == []


def test_solution_cap_still_confirms_forced_summands():
    """解的个数封顶时，T(0)、T(1) 仍由排除搜索确认，K_{11} 不确认"""
    D = 9
    target = _target([(T0, 0), (T1, 3), (K11, 0)], D)
    result = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P, solution_limit=1)
    assert result.solution_capped
    assert not result.node_exhausted
    assert len(result.solutions) == 1
    assert result.status == STATUS_AMBIGUOUS
    assert set(result.confirmed_keys()) == {T0.key, T1.key}


def test_capped_search_agrees_with_full_enumeration():
    D = 9
    target = _target([(T0, 0), (K11, 0)], D)
    full = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P)
    assert full.complete
    capped = solve_multiplicities(target, catalog_S_Gr(N, 1), D, N, P, solution_limit=1)
    assert capped.confirmed_keys() == full.confirmed_keys() == [T0.key]
