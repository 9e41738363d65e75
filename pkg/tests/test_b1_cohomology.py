"""B₁-上同调直接计算测试"""
import pytest

from algorithm.koszul_catalog import tate_char_B1
from infrastructure.linear.fp_matrix import FpMatrix
from infrastructure.oracle.b1_cohomology import (
    BComplex,
    b1_cohomology_oracle,
    build_cj_complex,
    horizontal_twist,
    simple_b_module,
    tate_cohomology_oracle,
)
from utils.errors import OracleConsistencyError


def test_horizontal_twist():
    p = 5
    assert [horizontal_twist(h, p) for h in range(5)] == [0, 2, 10, 12, 20]
    assert horizontal_twist(-1, p) == -8


def test_trivial_module():
    p = 3
    cx = simple_b_module(0, 0, p)
    assert b1_cohomology_oracle(cx, 0) == {0: 1}
    assert b1_cohomology_oracle(cx, 1) == {}
    assert b1_cohomology_oracle(cx, 2) == {2: 1}


@pytest.mark.parametrize("p", [3, 5])
def test_simple_modules_match_closed_form(p):
    """L(i)⊗(aω) 的上同调与闭式一致（权已除以 p）"""
    for i in range(p - 1):
        for a in range(-2 * p, 2 * p):
            cx = simple_b_module(i, a, p)
            for l in range(4):
                weight = tate_char_B1(i, a, l, p)
                expected = {} if weight is None else {weight // p: 1}
                assert b1_cohomology_oracle(cx, l) == expected, (i, a, l)


def test_tate_agrees_in_positive_degrees():
    p = 3
    cx = simple_b_module(1, 1, p)
    for l in (1, 2, 3):
        assert tate_cohomology_oracle(cx, l) == b1_cohomology_oracle(cx, l)


def test_rejects_non_restricted_action():
    """F^p ≠ 0 时不是 B₁-表示"""
    p = 3
    lower = FpMatrix(p, 4, 4, {(1, 0): 1, (2, 1): 1, (3, 2): 1})
    cx = BComplex.single(p, [3, 1, -1, -3], lower)
    with pytest.raises(OracleConsistencyError):
        b1_cohomology_oracle(cx, 0)


def test_cj_complex_is_valid():
    cx = build_cj_complex(4, 3, 1, (1, 2, 0, 1))
    cx.validate()
    assert cx.positions()[-2:] == [-1, 0]
    truncated = build_cj_complex(4, 3, 1, (1, 2, 0, 1), k=1)
    truncated.validate()
    assert truncated.positions() == [0, 1]


def test_cj_complex_rejects_bad_t():
    with pytest.raises(ValueError):
        build_cj_complex(4, 3, 1, (3, 0, 0, 0))
    with pytest.raises(ValueError):
        build_cj_complex(4, 3, 1, (0, 0, 0))
