"""
分解定理的可执行目录

每个目录项是一个 SummandInstance；"nonzero" / "possible" 标记与定理中的
"(nonzero) multiplicity" / "(possibly zero) multiplicity" 一一对应。
扭（分次平移）在目录中一律为 unknown，由 verifier 经验地确定。
"""
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Set, Tuple, Union

from algorithm.koszul_catalog import bottom_degree, check_prime_bound, weight_interval
from config.constants import Constants
from infrastructure.characters.sl2_characters import (
    fusion_product,
    g1_invariants_tilting,
    tensor_tiltings,
    tilting_normal_form,
)
from infrastructure.oracle.monomials import permutation_count
from utils.errors import HypothesisError

KIND_TILT_FREE = "TiltFree"
KIND_K = "K"
KIND_COV = "Cov"
KIND_K_INVARIANT = "KInv"
KIND_SHEAF_SYMQ = "SheafSymQ"
KIND_SHEAF_K = "SheafK"

SUMMAND_KINDS = (KIND_TILT_FREE, KIND_K, KIND_COV, KIND_K_INVARIANT, KIND_SHEAF_SYMQ, KIND_SHEAF_K)


@dataclass(frozen=True)
class SummandInstance:
    """目录中的一个直和项"""
    kind: str
    indices: Tuple[int, ...]
    frobenius_level: int = 1
    twist: Union[int, str] = Constants.TWIST_UNKNOWN
    multiplicity: Union[int, str] = Constants.MULTIPLICITY_UNKNOWN_POSITIVE
    flag: str = Constants.FLAG_NONZERO

    @property
    def key(self) -> Tuple[str, Tuple[int, ...], int]:
        """与扭、重数无关的身份"""
        return self.kind, self.indices, self.frobenius_level

    def with_twist(self, twist: int, multiplicity: Union[int, str, None] = None) -> "SummandInstance":
        return replace(
            self,
            twist=twist,
            multiplicity=self.multiplicity if multiplicity is None else multiplicity,
        )

    def label(self) -> str:
        r = self.frobenius_level
        fr = "Fr" if r == 1 else f"Fr^{r}"
        power = "p" if r == 1 else f"p^{r}"
        idx = "".join(str(i) for i in self.indices)
        if self.kind == KIND_TILT_FREE:
            return f"T({self.indices[0]})^{fr}⊗S^{power}"
        if self.kind == KIND_K:
            return f"K_{{{idx}}}^{fr}"
        if self.kind == KIND_COV:
            return f"S{{{self.indices[0]}}}"
        if self.kind == KIND_K_INVARIANT:
            return f"K{{{idx}}}"
        if self.kind == KIND_SHEAF_SYMQ:
            return f"S^{self.indices[0]}Q"
        return f"𝒦_{{{idx}}}"

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "indices": list(self.indices),
            "frobenius_level": self.frobenius_level,
            "twist": self.twist,
            "multiplicity": self.multiplicity,
            "flag": self.flag,
            "label": self.label(),
        }


@dataclass
class DecompositionReport:
    """目录查询的结果"""
    scenario: str
    params: Dict
    catalog: List[SummandInstance] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for entry in self.catalog:
            ident = (entry.key, entry.twist)
            if ident in seen:
                raise ValueError(f"目录中有重复项: {entry.label()} (twist={entry.twist})")
            seen.add(ident)

    def nonzero(self) -> List[SummandInstance]:
        return [e for e in self.catalog if e.flag == Constants.FLAG_NONZERO]

    def possible(self) -> List[SummandInstance]:
        return [e for e in self.catalog if e.flag == Constants.FLAG_POSSIBLE]

    def to_dict(self) -> Dict:
        return {
            "scenario": self.scenario,
            "params": dict(self.params),
            "consistent": True,
            "entries": [e.to_dict() for e in self.catalog],
            "residual_degrees": [],
            "notes": list(self.notes),
        }


def _check_n_r(n: int, r: int) -> None:
    if n < Constants.MIN_N:
        raise HypothesisError(f"需要 n ≥ {Constants.MIN_N}，当前 n={n}")
    if r < 1:
        raise HypothesisError(f"需要 r ≥ 1，当前 r={r}")


def _flag(nonzero: bool) -> str:
    return Constants.FLAG_NONZERO if nonzero else Constants.FLAG_POSSIBLE


# ========== S 与 R 的目录 ==========

def catalog_S_Gr(n: int, r: int, p: Optional[int] = None, allow_small_p: bool = False) -> List[SummandInstance]:
    """
    S^{G_r} 作为 (G^{(r)}, S^{p^r})-模的直和项

    r = 1: T(0..n−3)^Fr⊗S^p 与 K_1..K_{n−3}^Fr（K_l = K_{ll}(l+2)），p ≥ n−2 时全部非零
    r ≥ 2: K_{jk}^{Fr^r} (1 ≤ j,k ≤ n−3) 与 T(0..n−3)^{Fr^r}⊗S^{p^r}，p ≥ max{n−2,3} 时全部非零
    """
    _check_n_r(n, r)
    if p is not None:
        check_prime_bound(n, p, allow_small_p)
    if r == 1:
        flag = _flag(p is None or p >= n - 2)
        entries = [SummandInstance(KIND_TILT_FREE, (l,), 1, flag=flag) for l in range(n - 2)]
        entries += [SummandInstance(KIND_K, (l, l), 1, flag=flag) for l in range(1, n - 2)]
        return entries
    flag = _flag(p is None or p >= max(n - 2, Constants.MIN_P))
    entries = [SummandInstance(KIND_K, (j, k), r, flag=flag) for j in range(1, n - 2) for k in range(1, n - 2)]
    entries += [SummandInstance(KIND_TILT_FREE, (l,), r, flag=flag) for l in range(n - 2)]
    return entries


def catalog_R(n: int, r: int, p: Optional[int] = None, allow_small_p: bool = False) -> List[SummandInstance]:
    """R = S^G 的 Frobenius 直和项：协变模 S{l} 与 K{j,k} = K_{jk}^G"""
    converted = []
    for entry in catalog_S_Gr(n, r, p, allow_small_p):
        kind = KIND_COV if entry.kind == KIND_TILT_FREE else KIND_K_INVARIANT
        converted.append(replace(entry, kind=kind))
    return converted


# ========== (T(j)⊗S)^{G_1} ==========

def tjs_top_index(n: int, p: int, j: int) -> int:
    """m = ⌊((n−2)(p−1)+j)/p⌋"""
    return ((n - 2) * (p - 1) + j) // p


def decompose_TjS_G1(n: int, p: int, j: int, allow_small_p: bool = False) -> DecompositionReport:
    """
    (T(j)⊗S)^{G₁} 的直和项

    j < p−1: T(0..m)^Fr⊗S^p 与 K_1..K_{n−3}^Fr，全部非零
    j ≥ p−1: 只有 T(0..m)^Fr⊗S^p，l ∈ [j₂, m] 时非零，其余为 possible
    """
    _check_n_r(n, 1)
    check_prime_bound(n, p, allow_small_p)
    if j < 0:
        raise HypothesisError(f"需要 j ≥ 0，当前 j={j}")
    m = tjs_top_index(n, p, j)
    j1, j2 = tilting_normal_form(j, p)
    params = {"n": n, "p": p, "j": j, "m": m, "j1": j1, "j2": j2}
    report = DecompositionReport(scenario="tjs", params=params)
    if j < p - 1:
        report.catalog = [SummandInstance(KIND_TILT_FREE, (l,), 1) for l in range(m + 1)]
        report.catalog += [SummandInstance(KIND_K, (l, l), 1) for l in range(1, n - 2)]
        for l in range(1, n - 2):
            witnesses = twist_witnesses(n, p, l, j)
            if witnesses:
                first = witnesses[0]
                report.notes.append(
                    f"K_{l}^Fr(−p(l+2)−d_t): 最小 d_t = {first.twist}，最低次 {first.bottom_degree}"
                )
    else:
        report.catalog = [
            SummandInstance(KIND_TILT_FREE, (l,), 1, flag=_flag(j2 <= l <= m)) for l in range(m + 1)
        ]
        report.notes.append(f"T(j) 是 G₁-投射的，没有 K 项；非零区间 [{j2}, {m}]")
    return report


def _a_map(j: int, p: int) -> int:
    return max(0, (j + 1 - p) // p)


def _b_map(j: int, n: int, p: int) -> int:
    return n - 2 + (j - n + 2) // p


@dataclass(frozen=True)
class LimitResult:
    """迭代 [a, b] ↦ [a(a), b(b)] 的不动点"""
    lo: int
    hi: int
    iterations: int
    trajectory: Tuple[Tuple[int, int], ...]


def iterate_limit(n: int, p: int, j: int) -> LimitResult:
    """
    从 [j, j] 出发迭代 a(j) = max(0, ⌊(j+1−p)/p⌋)、b(j) = n−2+⌊(j−n+2)/p⌋ 到不动点

    j ≤ n−3 时极限为 [0, n−3]，否则为 [0, n−2]。iterations 是区间发生变化的步数。
    """
    _check_n_r(n, 1)
    if j < 0:
        raise HypothesisError(f"需要 j ≥ 0，当前 j={j}")
    current = (j, j)
    trajectory = [current]
    iterations = 0
    while True:
        nxt = (_a_map(current[0], p), _b_map(current[1], n, p))
        if nxt == current:
            break
        iterations += 1
        current = nxt
        trajectory.append(current)
    return LimitResult(lo=current[0], hi=current[1], iterations=iterations, trajectory=tuple(trajectory))


# ========== K_{jk}^{G_1} ==========

def decompose_Kjk_G1(n: int, p: int, j: int, k: int, allow_small_p: bool = False) -> DecompositionReport:
    """
    K_{jk}^{G₁} 的直和项

    K_{rl}^Fr (1 ≤ r,l ≤ n−3) 中 r 落在 l 对应区间内的非零，其余 possible；
    T(0..n−3)^Fr⊗S^p 为 possible。
    """
    _check_n_r(n, 1)
    check_prime_bound(n, p, allow_small_p)
    for name, value in (("j", j), ("k", k)):
        if not 1 <= value <= n - 3:
            raise HypothesisError(Constants.ERROR_RANGE_TEMPLATE.format(name=name, value=value, lo=1, hi=n - 3))
    report = DecompositionReport(scenario="kjk", params={"n": n, "p": p, "j": j, "k": k})
    for l in range(1, n - 2):
        interval = weight_interval(n, p, j, k, l, shifted=False)
        lo, hi = max(interval.lo, 1), min(interval.hi, n - 3)
        for r in range(1, n - 2):
            report.catalog.append(SummandInstance(KIND_K, (r, l), 1, flag=_flag(lo <= r <= hi)))
        report.notes.append(f"l={l}: r ∈ [{lo}, {hi}]（m_lk={interval.m}）")
    report.catalog += [
        SummandInstance(KIND_TILT_FREE, (l,), 1, flag=Constants.FLAG_POSSIBLE) for l in range(n - 2)
    ]
    return report


# ========== 非区间例子与组合扫描 ==========

def noninterval_example(n: int, p: int) -> Tuple[int, Set[int]]:
    """
    j = p−1 + (3p−2)p 时 (T(j)⊗S)^{G₁} 的 tilt-free 指标集

    c = ⌊(n−1)(p−1)/p⌋，集合为 [p−1, p−2+c] ∪ [3p−2−c, 3p−2+c]。
    :return: (j, 指标集)
    """
    if p < n:
        raise HypothesisError(f"这个例子需要 p ≥ n，当前 n={n}, p={p}")
    c = (n - 1) * (p - 1) // p
    j = p - 1 + (3 * p - 2) * p
    values = set(range(p - 1, p - 1 + c)) | set(range(3 * p - 2 - c, 3 * p - 1 + c))
    if values == set(range(min(values), max(values) + 1)):
        raise HypothesisError(f"n={n}, p={p} 时指标集 {sorted(values)} 是区间，不构成反例")
    return j, values


@lru_cache(maxsize=65536)
def _tensor_support(l: int, s: int, p: int) -> Tuple[int, ...]:
    return tuple(tensor_tiltings([l, s], p).support())


def _truncated_component(t: int, p: int) -> int:
    """k[x,y]/(x^p,y^p) 的第 t 次部分 ≅ T(s)"""
    return t if t <= p - 1 else 2 * p - 2 - t


def tilt_summand_scan(n: int, p: int, j: int) -> Set[int]:
    """
    {l : T(l)^Fr⊗S^p 是 (T(j)⊗S/S^p_+S)^{G₁} 的直和项}

    S/S^p_+S = ⊗_i k[x_i,y_i]/(x_i^p,y_i^p)，每个因子的各次部分都是 T(s)，s ∈ [0, p−1]。
    逐个因子传播 ⊗ T(s) 的 tilting 支撑，最后对每个 T(l') 取 G₁-不变量。
    """
    if j < 0:
        raise HypothesisError(f"需要 j ≥ 0，当前 j={j}")
    factor = sorted({_truncated_component(t, p) for t in range(2 * p - 1)})
    support: Set[int] = {j}
    for _ in range(n):
        support = {l2 for l in support for s in factor for l2 in _tensor_support(l, s, p)}
    result: Set[int] = set()
    for l in support:
        result.update(g1_invariants_tilting(l, p).support())
    return result


# ========== 扭 ==========

@dataclass(frozen=True)
class TwistWitness:
    """K_{ll}^Fr(−d_t) 形式的直和项：twist = d_t，最低次 = d_t + p·(l+2)"""
    l: int
    twist: int
    bottom_degree: int
    count: int


def twist_witnesses(n: int, p: int, l: int, j: int = 0) -> List[TwistWitness]:
    """
    (T(j)⊗S)^{G₁} 中 K_l^Fr(−p(l+2)−d_t) 的扭与个数，j < p−1

    t ∈ [0, p−2]^n 且 L(j)⊗̲L(t_1)⊗̲…⊗̲L(t_n) 含 L(q_t)，l 偶时 q_t = 0，l 奇时 q_t = p−2；
    个数为 L(q_t) 的重数 n_t，按 d_t 汇总。
    """
    if not 0 <= j <= p - 2:
        raise HypothesisError(f"扭见证只对 0 ≤ j ≤ p−2 定义，当前 j={j}")
    if not 1 <= l <= n - 3:
        raise HypothesisError(Constants.ERROR_RANGE_TEMPLATE.format(name="l", value=l, lo=1, hi=n - 3))
    wanted = 0 if l % 2 == 0 else p - 2
    counts: Dict[int, int] = {}
    for t in combinations_with_replacement(range(p - 1), n):
        mult = fusion_product([j, *t], p)[wanted]
        if mult:
            d_t = sum(t)
            counts[d_t] = counts.get(d_t, 0) + mult * permutation_count(tuple(sorted(t, reverse=True)))
    base = p * bottom_degree(l, l)
    return [TwistWitness(l=l, twist=d, bottom_degree=d + base, count=c) for d, c in sorted(counts.items())]


@dataclass(frozen=True)
class TwistWindow:
    lo: int
    hi: int


def gorenstein_twist_window(n: int, r: int, c: int) -> TwistWindow:
    """
    R 的 Frobenius 直和项的规范化扭（除以 p^r）所在区间 [0, e−c]

    R 是 Gorenstein 的，ω_R = R(−e)，e = n；c 是直和项生成元的最低次。
    """
    _check_n_r(n, r)
    if not 0 <= c <= n:
        raise HypothesisError(Constants.ERROR_RANGE_TEMPLATE.format(name="c", value=c, lo=0, hi=n))
    return TwistWindow(0, n - c)


# ========== 层的推出 ==========

def pushforward_catalog(n: int, p: int, r: int) -> List[SummandInstance]:
    """
    Fr^r_* 𝒪 在 Grassmannian 上的直和项标签

    r = 1: 𝒦_j 与 S^lQ，p ≥ n−1 时非零；r ≥ 2: 𝒦_{jk} 与 S^lQ，p ≥ n 时非零。
    """
    _check_n_r(n, r)
    if r == 1:
        flag = _flag(p >= n - 1)
        entries = [SummandInstance(KIND_SHEAF_K, (j,), 1, flag=flag) for j in range(1, n - 2)]
    else:
        flag = _flag(p >= n)
        entries = [SummandInstance(KIND_SHEAF_K, (j, k), r, flag=flag) for j in range(1, n - 2) for k in range(1, n - 2)]
    entries += [SummandInstance(KIND_SHEAF_SYMQ, (l,), r, flag=flag) for l in range(n - 2)]
    return entries
