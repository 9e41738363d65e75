"""SL₂ 特征标演算测试"""
import itertools

import pytest

from infrastructure.characters.sl2_characters import (
    TiltingMultiset,
    WeightCharacter,
    char_symmetric_power_S,
    char_tilting,
    char_weyl,
    decompose_into_tiltings,
    frobenius_scale,
    fusion_product,
    g1_invariants_tilting,
    invariant_multiplicity,
    tensor_tiltings,
    tilting_normal_form,
    tilting_pieri,
    weyl_expand,
)
from utils.errors import AsymmetricCharacterError, GoodFiltrationError, NotTiltingCharacterError

PRIMES = [3, 5, 7]


@pytest.mark.parametrize(
    "m, expected",
    [
        (0, {0: 1}),
        (2, {2: 1, 0: 1, -2: 1}),
        (3, {3: 1, 1: 1, -1: 1, -3: 1}),
    ],
)
def test_char_weyl(m, expected):
    assert char_weyl(m) == expected


def test_char_weyl_negative():
    with pytest.raises(ValueError):
        char_weyl(-1)


@pytest.mark.parametrize(
    "j, p, expected",
    [
        (3, 3, {3: 1, 1: 2, -1: 2, -3: 1}),
        (2, 3, {2: 1, 0: 1, -2: 1}),
        (4, 3, {4: 1, 2: 1, 0: 2, -2: 1, -4: 1}),
        (5, 3, {5: 1, 3: 1, 1: 1, -1: 1, -3: 1, -5: 1}),
    ],
)
def test_char_tilting(j, p, expected):
    assert char_tilting(j, p) == expected


@pytest.mark.parametrize("p", PRIMES)
def test_char_tilting_top_weight_and_symmetry(p):
    for j in range(3 * p * p):
        c = char_tilting(j, p)
        assert c.highest_weight == j
        assert c[j] == 1
        assert c.is_symmetric()


def test_tilting_normal_form():
    assert tilting_normal_form(1, 3) == (1, 0)
    assert tilting_normal_form(2, 3) == (2, 0)
    assert tilting_normal_form(7, 3) == (4, 1)
    assert tilting_normal_form(69, 5) == (4, 13)


@pytest.mark.parametrize(
    "c, p, expected",
    [
        (char_tilting(2, 3) * char_tilting(2, 3), 3, {4: 1, 2: 1}),
        (char_weyl(1) * char_weyl(1), 3, {2: 1, 0: 1}),
        (WeightCharacter({0: 1}), 5, {0: 1}),
    ],
)
def test_decompose_into_tiltings(c, p, expected):
    assert decompose_into_tiltings(c, p) == expected


def test_decompose_rejects_non_tilting():
    with pytest.raises(NotTiltingCharacterError):
        decompose_into_tiltings(WeightCharacter({1: 1}), 3)
    # χ(4) 单独不是 p=3 的 tilting 特征标：剥掉 T(4) 后 χ(0) 变成 −1
    with pytest.raises(NotTiltingCharacterError):
        decompose_into_tiltings(char_weyl(4), 3)


@pytest.mark.parametrize("p", PRIMES)
def test_decomposition_preserves_dimension(p):
    for a, b in itertools.product(range(2 * p), repeat=2):
        product = char_tilting(a, p) * char_tilting(b, p)
        decomposition = decompose_into_tiltings(product, p)
        assert decomposition.dimension(p) == product.dim
        assert decomposition.character(p) == product


@pytest.mark.parametrize(
    "a, p, expected",
    [
        (4, 5, {5: 1}),
        (5, 5, {6: 1, 4: 2}),
        (6, 5, {7: 1, 5: 1}),
    ],
)
def test_tilting_pieri_examples(a, p, expected):
    assert tilting_pieri(a, p) == expected


@pytest.mark.parametrize("p", PRIMES)
def test_tilting_pieri_matches_peeling(p):
    """闭式 Pieri 公式与特征标剥离在整个范围内一致"""
    for a in range(p - 1, 3 * p - 2):
        assert tilting_pieri(a, p) == decompose_into_tiltings(char_tilting(a, p) * char_weyl(1), p)


def test_tilting_pieri_range():
    with pytest.raises(ValueError):
        tilting_pieri(1, 3)
    with pytest.raises(ValueError):
        tilting_pieri(7, 3)


def test_pieri_formatting():
    assert str(tilting_pieri(5, 5)) == "T(6) + 2·T(4)"
    assert str(TiltingMultiset()) == "0"


@pytest.mark.parametrize(
    "cs, p, expected",
    [
        ([1, 1], 3, {0: 1}),
        ([1, 0], 3, {1: 1}),
        ([1, 2], 5, {3: 1, 1: 1}),
        ([], 5, {0: 1}),
    ],
)
def test_fusion_product(cs, p, expected):
    assert fusion_product(cs, p) == expected


def test_fusion_product_rejects_projective_index():
    with pytest.raises(ValueError):
        fusion_product([2], 3)


def _fuse_multiset(ms: TiltingMultiset, c: int, p: int) -> TiltingMultiset:
    total = TiltingMultiset()
    for l, m in ms.items():
        part = fusion_product([l, c], p)
        total = total + TiltingMultiset({k: v * m for k, v in part.items()})
    return total


@pytest.mark.parametrize("p", [3, 5])
def test_fusion_commutative_and_associative(p):
    indices = range(p - 1)
    for a, b, c in itertools.product(indices, repeat=3):
        assert fusion_product([a, b], p) == fusion_product([b, a], p)
        left = _fuse_multiset(fusion_product([a, b], p), c, p)
        assert left == fusion_product([a, b, c], p)
        assert fusion_product([a, b, c], p) == fusion_product([c, a, b], p)


@pytest.mark.parametrize("p", PRIMES)
def test_fusion_rules_trivial_and_top(p):
    """L(j)⊗̲L(j) ∋ L(0)，L(j)⊗̲L(p−2−j) ∋ L(p−2)"""
    for j in range(p - 1):
        assert 0 in fusion_product([j, j], p)
        assert p - 2 in fusion_product([j, p - 2 - j], p)


@pytest.mark.parametrize(
    "l, p, expected",
    [
        (4, 3, {0: 1}),
        (2, 3, {}),
        (0, 3, {0: 1}),
        (7, 3, {1: 1}),
        (3, 3, {}),
        (8, 5, {0: 1}),
    ],
)
def test_g1_invariants_tilting(l, p, expected):
    assert g1_invariants_tilting(l, p) == expected


@pytest.mark.parametrize("p", PRIMES)
def test_g1_invariants_support_and_parity(p):
    """只有 l = 0 或 l₁ = 2p−2 时非零，此时 l₂ 与 l − (2p−2) 同奇偶"""
    for l in range(1, 4 * p * p):
        result = g1_invariants_tilting(l, p)
        l1, l2 = tilting_normal_form(l, p)
        if l1 != 2 * p - 2:
            assert result == {}
        else:
            assert result == {l2: 1}
            assert (l - (2 * p - 2)) % 2 == l2 % 2


def test_weyl_expand():
    assert weyl_expand(WeightCharacter({2: 1, 0: 2, -2: 1})) == {2: 1, 0: 1}
    assert weyl_expand(WeightCharacter({0: 1})) == {0: 1}
    assert weyl_expand(char_tilting(4, 3)) == {4: 1, 0: 1}
    with pytest.raises(AsymmetricCharacterError):
        weyl_expand(WeightCharacter({2: 1}))


def test_invariant_multiplicity():
    assert invariant_multiplicity(char_weyl(0)) == 1
    assert invariant_multiplicity(WeightCharacter({1: 4, -1: 4})) == 0
    assert invariant_multiplicity(char_symmetric_power_S(4, 2)) == 6
    with pytest.raises(GoodFiltrationError):
        invariant_multiplicity(WeightCharacter({2: 1, 0: 0, -2: 1}))


def test_frobenius_scale():
    assert frobenius_scale(WeightCharacter({1: 1, -1: 1}), 1, 3) == {3: 1, -3: 1}
    c = char_tilting(4, 5)
    assert frobenius_scale(c, 0, 5) == c
    assert frobenius_scale(WeightCharacter({2: 1}), 2, 3) == {18: 1}


def test_char_symmetric_power_S():
    assert char_symmetric_power_S(4, 2) == {2: 10, 0: 16, -2: 10}
    assert char_symmetric_power_S(4, 1).dim == 8
    assert char_symmetric_power_S(4, 0) == {0: 1}


def test_tensor_tiltings():
    assert tensor_tiltings([2, 1], 3) == {3: 1}
    assert tensor_tiltings([], 3) == {0: 1}


def test_weyl_expand_mixed_parity():
    mixed = WeightCharacter({1: 1, 0: 1, -1: 1})
    assert weyl_expand(mixed) == {1: 1, 0: 1}
    assert invariant_multiplicity(mixed) == 1
    assert weyl_expand(char_weyl(3) + char_weyl(0)) == {3: 1, 0: 1}
