"""暴力不变量计算测试"""
import pytest

from infrastructure.characters.sl2_characters import char_tilting, char_weyl
from infrastructure.oracle.explicit_module import ExplicitModule, realize_tilting
from infrastructure.oracle.polynomial_oracle import (
    TARGET_S,
    InvariantTarget,
    PolynomialOracle,
    graded_invariants_of_tensor,
    gr_generators_S,
    gr_invariants_S,
)


@pytest.mark.parametrize("j", range(5))
def test_symmetric_power_character(j):
    assert ExplicitModule.symmetric_power(j, 5).character() == char_weyl(j)


@pytest.mark.parametrize("p", [3, 5])
def test_realized_tilting_has_tilting_character(p):
    """j ≥ p 时走 Casimir 广义特征子空间"""
    for j in range(2 * p - 1):
        assert realize_tilting(j, p).character() == char_tilting(j, p)


def test_low_degree_G1_invariants():
    """n=4, p=3: 第 2 次只有 6 个 Plücker 坐标"""
    assert gr_invariants_S(4, 3, 1, 0) == {0: 1}
    assert gr_invariants_S(4, 3, 1, 1) == {}
    assert gr_invariants_S(4, 3, 1, 2) == {0: 6}
    assert gr_generators_S(4, 3, 1, 2) == {0: 6}


def test_tensor_invariants_low_degree():
    """T(0)⊗S 与 S 一致；(T(1)⊗V^{⊕4})^{G₁} 只剩四个 Λ²V"""
    assert graded_invariants_of_tensor(realize_tilting(0, 3), 4, 3, 1, 2) == {0: 6}
    assert graded_invariants_of_tensor(realize_tilting(1, 3), 4, 3, 1, 1) == {0: 4}


def test_pth_powers_are_invariant():
    """x_i^p, y_i^p 给出第 p 次的 ±1 权（除以 p 后）"""
    chars = gr_invariants_S(4, 3, 1, 3)
    assert chars[1] >= 4
    assert chars[-1] >= 4
    assert chars.is_symmetric()


def test_oracle_caches_results():
    oracle = PolynomialOracle(threads=1)
    target = InvariantTarget(TARGET_S, 4, 3, 1)
    first = oracle.graded_invariants(target, 3)
    assert oracle.graded_invariants(target, 3) is first
    assert first.invariants[0] == {0: 1}
    assert first.generators[0] == {0: 1}
    assert sorted(first.invariants) == [0, 1, 2, 3]


def test_unknown_target_kind():
    oracle = PolynomialOracle()
    with pytest.raises(ValueError):
        oracle.graded_invariants(InvariantTarget("nonsense", 4, 3), 2)


@pytest.mark.slow
def test_kernel_dimensions_of_K11():
    """n=4 时 K_{11} 在第 3、4 次的维数为 4 与 30"""
    oracle = PolynomialOracle(threads=1)
    assert oracle.kjk_kernel_character(4, 1, 1, 3, p=3, max_degree=4).dim == 4
    assert oracle.kjk_kernel_character(4, 1, 1, 4, p=3, max_degree=4).dim == 30
