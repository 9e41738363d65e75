"""单项式基与除幂算子测试"""
from math import comb

import pytest

from infrastructure.oracle.monomials import (
    LOWER,
    RAISE,
    divided_power_matrix,
    divided_power_on_monomial,
    monomial_basis,
    monomial_weight,
    pair_degrees,
    pair_monomials,
    permutation_count,
    sorted_partitions,
)


@pytest.mark.parametrize("n, d", [(1, 0), (2, 2), (3, 3), (4, 2)])
def test_basis_size(n, d):
    """S_d 的维数是 C(d+2n−1, 2n−1)"""
    basis = monomial_basis(n, d)
    assert len(basis) == comb(d + 2 * n - 1, 2 * n - 1)
    assert all(basis.index[m] == i for i, m in enumerate(basis.monomials))


def test_basis_rejects_negative_degree():
    with pytest.raises(ValueError):
        monomial_basis(2, -1)


def test_weight_and_pair_degrees():
    assert monomial_weight((1, 0, 0, 2)) == -1
    assert pair_degrees((1, 2, 3, 0)) == (3, 3)


def test_pair_monomials_fixed_weight():
    assert pair_monomials([1, 1], 0) == [(1, 0, 0, 1), (0, 1, 1, 0)]
    assert pair_monomials([1, 1], 1) == []
    assert pair_monomials([2], 2) == [(2, 0)]


def test_divided_powers_on_single_pair():
    assert divided_power_on_monomial(RAISE, 1, (0, 2)) == {(1, 1): 2}
    assert divided_power_on_monomial(RAISE, 2, (0, 2)) == {(2, 0): 1}
    assert divided_power_on_monomial(RAISE, 3, (0, 2)) == {}
    assert divided_power_on_monomial(LOWER, 0, (1, 1)) == {(1, 1): 1}


def test_lowering_is_a_derivation():
    assert divided_power_on_monomial(LOWER, 1, (1, 0, 1, 0)) == {(0, 1, 1, 0): 1, (1, 0, 0, 1): 1}


def test_divided_power_matrix_shifts_weight():
    p = 3
    basis = monomial_basis(2, 2)
    e = divided_power_matrix(RAISE, 1, 2, 2, p)
    for (row, col) in e.entries:
        assert monomial_weight(basis.monomials[row]) == monomial_weight(basis.monomials[col]) + 2


def test_divided_power_matrix_validates_arguments():
    with pytest.raises(ValueError):
        divided_power_matrix("h", 1, 2, 2, 3)
    with pytest.raises(ValueError):
        divided_power_matrix(RAISE, 0, 2, 2, 3)


def test_partitions_and_permutation_counts():
    assert list(sorted_partitions(3, 2)) == [(3, 0), (2, 1)]
    assert permutation_count((2, 1, 1)) == 3
    assert permutation_count((0, 0, 0, 0)) == 1
    assert sum(permutation_count(mu) for mu in sorted_partitions(4, 3)) == comb(6, 2)
