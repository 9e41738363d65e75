"""M_j、K_{jk} 特征标与上同调预测器测试"""
import pytest

from algorithm.koszul_catalog import (
    bottom_character,
    bottom_degree,
    char_Kj,
    char_Kjk,
    char_Kjk_dual,
    check_prime_bound,
    check_propKjk,
    m_lk,
    predict_cohomology,
    q_value_range,
    q_values,
    resolution_spec,
    tate_char_B1,
    tate_char_Cj,
    weight_interval,
)
from utils.errors import HypothesisError


def test_resolution_spec_n4():
    spec = resolution_spec(4, 1)
    assert spec.length == 4
    assert spec.positions == [0, -1, -2, -3]
    assert spec.wedge_indices() == [0, 1, 3, 4]
    assert spec.describe()[2] == "-2: T(0)⊗Λ^3F(−3)"


@pytest.mark.parametrize("n, j", [(4, 0), (4, 2), (6, 4)])
def test_resolution_spec_rejects_j(n, j):
    with pytest.raises(HypothesisError):
        resolution_spec(n, j)


def test_prime_bound():
    check_prime_bound(6, 5)
    with pytest.raises(HypothesisError):
        check_prime_bound(6, 3)
    check_prime_bound(6, 3, allow_small_p=True)


def test_K11_low_degrees():
    """n=4: K_{11} 从第 3 次开始，维数 4, 30"""
    assert char_Kjk(4, 1, 1, 2) == {}
    assert char_Kjk(4, 1, 1, 3) == {0: 4}
    assert char_Kjk(4, 1, 1, 4) == {1: 15, -1: 15}
    assert char_Kj(4, 1, 0) == {0: 4}


def test_dual_of_K11():
    assert char_Kjk_dual(4, 1, 1, -1) == {0: 4}
    assert char_Kjk_dual(4, 1, 1, 0) == {1: 15, -1: 15}


@pytest.mark.parametrize("j, k, expected", [(2, 1, 2), (1, 1, 3), (1, 2, 4), (3, 1, 2)])
def test_bottom_degree(j, k, expected):
    assert bottom_degree(j, k) == expected


def test_bottom_character():
    assert bottom_character(4, 1, 1) == {0: 4}
    assert bottom_character(6, 3, 1) == {1: 15, -1: 15}
    assert bottom_character(6, 1, 3) == {2: 6, 0: 6, -2: 6}


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_structural_suite(n):
    """投射维数、最低次、对称性与对偶在 D = n+6 内全部成立"""
    for j in range(1, n - 2):
        for k in range(1, n - 2):
            report = check_propKjk(n, j, k)
            assert report.ok, report.failures
            assert report.pdim == n - k - 2


def test_q_values():
    assert q_values(1, 2, 3).get(0) == 1
    assert q_values(1, 0, 3).get(1) == 0
    assert q_values(1, 0, 3).get(0) is None
    assert not q_values(1, 4, 3).defined
    with pytest.raises(ValueError):
        q_values(-1, 0, 3)


def test_q_value_range_exceptions():
    assert q_value_range(5, 1, 3, 0) == (1, 3)
    assert q_value_range(5, 2, 3, 1) == (1, 3)
    assert q_value_range(6, 1, 5, 0) == (1, 5)


def test_tate_char_B1():
    assert tate_char_B1(0, 0, 0, 3) == 0
    assert tate_char_B1(0, 0, 1, 3) is None
    assert tate_char_B1(1, 0, 1, 3) == 3
    assert tate_char_B1(1, 1, 2, 5) == 10
    with pytest.raises(ValueError):
        tate_char_B1(3, 0, 0, 3)


def test_tate_char_Cj():
    assert tate_char_Cj(4, 3, 1, (1, 1, 0, 0), 0) == 3
    assert tate_char_Cj(4, 3, 1, (1, 1, 0, 0), 1) is None
    assert tate_char_Cj(4, 3, 1, (0, 0, 0, 0), 1) == 3


@pytest.mark.parametrize(
    "t, r2",
    [
        ((0, 0, 0, 0), None),
        ((1, 1, 0, 0), 3),
        ((1, 1, 1, 0), None),
        ((2, 2, 2, 0), 3),
        ((2, 2, 2, 2), None),
    ],
)
def test_predictor_n4(t, r2):
    prediction = predict_cohomology(4, 3, 1, 1, t, 1)
    assert prediction.epsilon == 0
    assert prediction.R1_weight == 3
    assert prediction.R2_weight == r2


def test_predictor_domain():
    with pytest.raises(HypothesisError):
        predict_cohomology(4, 3, 1, 1, (0, 0, 0, 0), 0)
    with pytest.raises(HypothesisError):
        predict_cohomology(5, 3, 1, 3, (0, 0, 0, 0, 0), 3)
    # l > n−3 在 l > k 时按 Tate 周期性接受
    assert predict_cohomology(4, 3, 1, 1, (0, 0, 0, 0), 3).R1_weight == 9


def test_m_lk():
    assert m_lk(6, 5, 1, 2, 2) == 1
    assert m_lk(6, 7, 1, 2, 3) == 0
    assert m_lk(7, 5, 4, 2, 3) == 1
    assert m_lk(7, 5, 1, 2, 1) == 1


def test_weight_interval():
    empty = weight_interval(6, 5, 1, 4, 2, shifted=False)
    assert empty.empty
    assert empty.values() == []
    shifted = weight_interval(6, 5, 1, 4, 2)
    assert (shifted.lo, shifted.hi) == (1, 1)
    assert 1 in shifted
    assert weight_interval(6, 7, 2, 2, 2).values() == [1, 2, 3]
    with pytest.raises(HypothesisError):
        weight_interval(6, 5, 1, 2, 1)
