"""直和项目录测试"""
import pytest

from algorithm.summand_catalog import (
    KIND_COV,
    KIND_K,
    KIND_K_INVARIANT,
    KIND_SHEAF_K,
    KIND_TILT_FREE,
    DecompositionReport,
    SummandInstance,
    catalog_R,
    catalog_S_Gr,
    decompose_Kjk_G1,
    decompose_TjS_G1,
    gorenstein_twist_window,
    iterate_limit,
    noninterval_example,
    pushforward_catalog,
    tilt_summand_scan,
    tjs_top_index,
    twist_witnesses,
)
from config.constants import Constants
from utils.errors import HypothesisError


@pytest.mark.parametrize("n, r, count", [(4, 1, 3), (4, 2, 3), (5, 1, 5), (5, 2, 7), (6, 3, 13)])
def test_catalog_sizes(n, r, count):
    assert len(catalog_S_Gr(n, r)) == count


def test_catalog_S_G1_n4():
    labels = [entry.label() for entry in catalog_S_Gr(4, 1, p=3)]
    assert labels == ["T(0)^Fr⊗S^p", "T(1)^Fr⊗S^p", "K_{11}^Fr"]


def test_catalog_small_p_flags_possible():
    entries = catalog_S_Gr(6, 1, p=3, allow_small_p=True)
    assert all(entry.flag == Constants.FLAG_POSSIBLE for entry in entries)
    with pytest.raises(HypothesisError):
        catalog_S_Gr(6, 1, p=3)


def test_catalog_S_G2_flags_follow_prime_bound():
    assert all(e.flag == Constants.FLAG_NONZERO for e in catalog_S_Gr(4, 2, p=3))
    small = catalog_S_Gr(6, 2, p=3, allow_small_p=True)
    assert all(e.flag == Constants.FLAG_POSSIBLE for e in small)
    assert catalog_S_Gr(4, 2, p=2, allow_small_p=True)[0].flag == Constants.FLAG_POSSIBLE


def test_catalog_R_kinds():
    kinds = {entry.kind for entry in catalog_R(5, 1)}
    assert kinds == {KIND_COV, KIND_K_INVARIANT}


def test_catalog_rejects_small_n():
    with pytest.raises(HypothesisError):
        catalog_S_Gr(3, 1)


def test_report_rejects_duplicates():
    entry = SummandInstance(KIND_TILT_FREE, (0,), 1, twist=0)
    with pytest.raises(ValueError):
        DecompositionReport(scenario="x", params={}, catalog=[entry, entry])


def test_report_to_dict():
    report = DecompositionReport(scenario="empty", params={"n": 4})
    data = report.to_dict()
    assert data["entries"] == []
    assert data["consistent"] is True
    assert data["residual_degrees"] == []


@pytest.mark.parametrize("j, m", [(1, 1), (2, 2), (3, 2), (5, 3)])
def test_tjs_top_index(j, m):
    assert tjs_top_index(4, 3, j) == m


def test_tjs_non_projective():
    report = decompose_TjS_G1(4, 3, 1)
    assert [e.kind for e in report.catalog] == [KIND_TILT_FREE, KIND_TILT_FREE, KIND_K]
    assert all(e.flag == Constants.FLAG_NONZERO for e in report.catalog)
    assert report.notes


@pytest.mark.parametrize("j, j2, m", [(2, 0, 2), (3, 0, 2), (5, 1, 3)])
def test_tjs_projective_interval(j, j2, m):
    """T(j) 是 G₁-投射的：只有 tilt-free 项，[j₂, m] 之外为 possible"""
    report = decompose_TjS_G1(4, 3, j)
    assert report.params["m"] == m
    assert report.params["j2"] == j2
    assert all(e.kind == KIND_TILT_FREE for e in report.catalog)
    assert [e.indices[0] for e in report.nonzero()] == list(range(j2, m + 1))
    assert [e.indices[0] for e in report.possible()] == list(range(0, j2))


def test_kjk_catalog_n6():
    report = decompose_Kjk_G1(6, 5, 1, 1)
    assert len([e for e in report.catalog if e.kind == KIND_K]) == 9
    assert all(e.flag == Constants.FLAG_POSSIBLE for e in report.catalog if e.kind == KIND_TILT_FREE)
    with pytest.raises(HypothesisError):
        decompose_Kjk_G1(6, 5, 1, 4)


def test_iterate_limit_trajectory():
    limit = iterate_limit(5, 3, 7)
    assert (limit.lo, limit.hi) == (0, 3)
    assert limit.iterations == 2
    assert limit.trajectory == ((7, 7), (1, 4), (0, 3))


def _ceil_log_plus_two(j, p):
    bound, power = 2, 1
    while power < j:
        power *= p
        bound += 1
    return bound


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_iterate_limit_exhaustive(n):
    for p in (3, 5, 7):
        if p < max(n - 2, 3):
            continue
        for j in range(3 * p * p + 1):
            limit = iterate_limit(n, p, j)
            expected_hi = n - 3 if j <= n - 3 else n - 2
            assert (limit.lo, limit.hi) == (0, expected_hi), (p, j)
            assert limit.iterations <= _ceil_log_plus_two(j, p)


def test_noninterval_example():
    j, values = noninterval_example(4, 5)
    assert j == 69
    assert values == {4, 5} | set(range(11, 16))


@pytest.mark.parametrize("n, p", [(4, 5), (5, 5), (4, 7), (6, 7)])
def test_noninterval_example_has_gap(n, p):
    _, values = noninterval_example(n, p)
    assert values != set(range(min(values), max(values) + 1))


def test_noninterval_example_requires_large_p():
    with pytest.raises(HypothesisError):
        noninterval_example(5, 3)


@pytest.mark.slow
def test_tilt_scan_reproduces_noninterval():
    j, values = noninterval_example(4, 5)
    scanned = tilt_summand_scan(4, 5, j)
    assert scanned == values
    assert not scanned & {7, 8, 9}


def test_tilt_scan_small():
    assert tilt_summand_scan(4, 3, 0) == {0, 1}


def test_twist_witnesses_n4_p3():
    """K_1^Fr 的第一个扭是 1，最低次 10 = 3p+1"""
    witnesses = twist_witnesses(4, 3, 1)
    assert [(w.twist, w.bottom_degree, w.count) for w in witnesses] == [(1, 10, 4), (3, 12, 4)]


def test_twist_witnesses_domain():
    with pytest.raises(HypothesisError):
        twist_witnesses(4, 3, 1, j=2)
    with pytest.raises(HypothesisError):
        twist_witnesses(4, 3, 2)


def test_gorenstein_window():
    window = gorenstein_twist_window(4, 1, 2)
    assert (window.lo, window.hi) == (0, 2)
    with pytest.raises(HypothesisError):
        gorenstein_twist_window(4, 1, 5)


def test_pushforward_catalog():
    r1 = pushforward_catalog(5, 5, 1)
    assert [e.kind for e in r1].count(KIND_SHEAF_K) == 2
    assert all(e.flag == Constants.FLAG_NONZERO for e in r1)
    r2 = pushforward_catalog(5, 3, 2)
    assert [e.kind for e in r2].count(KIND_SHEAF_K) == 4
    assert all(e.flag == Constants.FLAG_POSSIBLE for e in r2)
