"""
M_j、K_{jk} 的特征标与结构检查，q 值组合，Tate 上同调公式与上同调预测器

纯算法逻辑：只依赖特征标演算，不做任何线性代数。
权均以 ω 为单位且未除以 p（预测器给出的是 B^{(1)} 特征标之前的权）。
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from config.constants import Constants
from infrastructure.characters.resolution_terms import ResolutionTerm, resolution_terms
from infrastructure.characters.sl2_characters import WeightCharacter, char_symmetric_power_S, char_weyl
from utils.errors import HypothesisError, OracleConsistencyError


def _check_range(name: str, value: int, lo: int, hi: int) -> None:
    if not lo <= value <= hi:
        raise HypothesisError(Constants.ERROR_RANGE_TEMPLATE.format(name=name, value=value, lo=lo, hi=hi))


def check_prime_bound(n: int, p: int, allow_small_p: bool = False) -> None:
    """p ≥ max{n−2,3}，除非显式放宽"""
    bound = max(n - 2, Constants.MIN_P)
    if p < bound and not allow_small_p:
        raise HypothesisError(Constants.ERROR_SMALL_P_TEMPLATE.format(bound=bound, p=p))


# ========== 分解 (3.3) ==========

@dataclass(frozen=True)
class ResolutionSpec:
    """M_j 的分次分解，terms[u] 位于同调位置 −u"""
    n: int
    j: int
    terms: Tuple[ResolutionTerm, ...]

    @property
    def positions(self) -> List[int]:
        return [term.position for term in self.terms]

    @property
    def length(self) -> int:
        return len(self.terms)

    def wedge_indices(self) -> List[int]:
        return [term.wedge for term in self.terms]

    def describe(self) -> List[str]:
        return [f"{term.position}: {term.label()}" for term in self.terms]


def resolution_spec(n: int, j: int, p: Optional[int] = None, allow_small_p: bool = False) -> ResolutionSpec:
    """
    分解 (3.3) 的各项

    :param p: 给出时检查 p ≥ max{n−2,3}
    :raises HypothesisError: j 不在 [1, n−3] 内或 p 太小
    """
    _check_range("j", j, 1, n - 3)
    if p is not None:
        check_prime_bound(n, p, allow_small_p)
    return ResolutionSpec(n=n, j=j, terms=resolution_terms(n, j))


def _check_jk(n: int, j: int, k: int) -> None:
    _check_range("j", j, 1, n - 3)
    _check_range("k", k, 1, n - 3)


@lru_cache(maxsize=4096)
def char_Kjk(n: int, j: int, k: int, d: int) -> WeightCharacter:
    """
    K_{jk} = ker(P_k → P_{k−1}) 在第 d 次的特征标

    由 P_{k+1} ← P_{k+2} ← … 的正合性取交错和。
    :raises OracleConsistencyError: 出现负重数（正合性被破坏）
    """
    _check_jk(n, j, k)
    total = WeightCharacter()
    for term in resolution_terms(n, j)[k + 1:]:
        sign = -1 if (term.index - k - 1) % 2 else 1
        total = total + term.character_in_degree(n, d).scale(sign)
    if not total.is_effective():
        raise OracleConsistencyError(f"K_{{{j}{k}}} (n={n}) 在第 {d} 次的交错和出现负重数: {total!r}")
    return total


def char_Kj(n: int, j: int, d: int) -> WeightCharacter:
    """K_j = K_{jj}(j+2)"""
    return char_Kjk(n, j, j, d + j + 2)


def char_Kjk_dual(n: int, j: int, k: int, d: int) -> WeightCharacter:
    """
    K_{jk}^∨ = Hom_S(K_{jk}, S) 在第 d 次的特征标（d 可以为负）

    对偶复形 P_0^∨ → … → P_k^∨ → K^∨ → 0 正合，所以从分解的左端取交错和。
    P_u^∨ 的第 d 次为 C(n,a)·χ(w)·char S_{d+g}。
    """
    _check_jk(n, j, k)
    total = WeightCharacter()
    for term in resolution_terms(n, j)[: k + 1]:
        sign = -1 if (k - term.index) % 2 else 1
        part = char_weyl(term.tilting_weight).scale(comb(n, term.wedge)) * char_symmetric_power_S(n, d + term.shift)
        total = total + part.scale(sign)
    if not total.is_effective():
        raise OracleConsistencyError(f"K_{{{j}{k}}}^∨ (n={n}) 在第 {d} 次的交错和出现负重数: {total!r}")
    return total


def bottom_degree(j: int, k: int) -> int:
    """K_{jk} 的最低次：k < j 时为 k+1，否则为 k+2"""
    return k + 1 if k < j else k + 2


def bottom_character(n: int, j: int, k: int) -> WeightCharacter:
    """最低次的生成元 Λ^{k+1}F⊗S^{j−k−1}V 或 Λ^{k+2}F⊗S^{k−j}V"""
    if k < j:
        return char_weyl(j - k - 1).scale(comb(n, k + 1))
    return char_weyl(k - j).scale(comb(n, k + 2))


@dataclass
class KjkStructureReport:
    """K_{jk} 的结构检查结果"""
    n: int
    j: int
    k: int
    checked_degree: int
    pdim: int
    bottom_degree: int
    bottom_character: WeightCharacter
    dual_partner: Tuple[int, int]
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "j": self.j,
            "k": self.k,
            "checked_degree": self.checked_degree,
            "pdim": self.pdim,
            "bottom_degree": self.bottom_degree,
            "bottom_character": self.bottom_character.to_dict(),
            "dual_partner": list(self.dual_partner),
            "failures": list(self.failures),
        }


def check_propKjk(n: int, j: int, k: int, max_degree: Optional[int] = None) -> KjkStructureReport:
    """
    在特征标层面检查 K_{jk} 的结构性质

    - 投射维数 = 分解中 P_{k+1}, …, P_{n−1} 的长度 = n−k−2
    - 低于最低次的部分为零，最低次上是给定的生成元
    - 每一次都是对称的真特征标
    - 对偶：K_{jk}^∨ 的第 d 次 = K_{n−j−2,n−k−2} 的第 d+n 次
    """
    _check_jk(n, j, k)
    if max_degree is None:
        max_degree = n + 6
    terms = resolution_terms(n, j)
    pdim = len(terms) - (k + 1) - 1
    low = bottom_degree(j, k)
    bottom = bottom_character(n, j, k)
    partner = (n - j - 2, n - k - 2)
    report = KjkStructureReport(
        n=n, j=j, k=k, checked_degree=max_degree, pdim=pdim,
        bottom_degree=low, bottom_character=bottom, dual_partner=partner,
    )

    if pdim != n - k - 2:
        report.failures.append(f"pdim = {pdim}，期望 n−k−2 = {n - k - 2}")
    for d in range(max_degree + 1):
        char = char_Kjk(n, j, k, d)
        if d < low and char:
            report.failures.append(f"第 {d} 次低于最低次 {low} 却非零: {char!r}")
        if d == low and char != bottom:
            report.failures.append(f"最低次 {low} 的特征标 {char!r} ≠ {bottom!r}")
        if not char.is_symmetric():
            report.failures.append(f"第 {d} 次的特征标不对称: {char!r}")
    for d in range(-n, max_degree - n + 1):
        dual = char_Kjk_dual(n, j, k, d)
        expected = char_Kjk(n, partner[0], partner[1], d + n)
        if dual != expected:
            report.failures.append(
                f"对偶在第 {d} 次不成立: K^∨ = {dual!r}，K_{{{partner[0]}{partner[1]}}}(n) = {expected!r}"
            )
    return report


# ========== q 值 ==========

@dataclass(frozen=True)
class QValue:
    """q^ℓ_{jt}：j+d_t（ℓ=0）或 j+d_t−p+2（ℓ=1）被 p 整除时的商"""
    defined: bool
    ell: Optional[int] = None
    value: Optional[int] = None

    def get(self, ell: int) -> Optional[int]:
        """ℓ 对应的值，未定义时为 None"""
        if self.defined and self.ell == ell % 2:
            return self.value
        return None


def q_values(j: int, d_t: int, p: int) -> QValue:
    if j < 0 or d_t < 0:
        raise ValueError(f"需要 j ≥ 0、d_t ≥ 0，当前 j={j}, d_t={d_t}")
    if (j + d_t) % p == 0:
        return QValue(True, 0, (j + d_t) // p)
    if (j + d_t - p + 2) % p == 0:
        return QValue(True, 1, (j + d_t - p + 2) // p)
    return QValue(False)


def q_value_range(n: int, j: int, p: int, ell: int) -> Tuple[int, int]:
    """q^ℓ 可能取值的区间，含 (j,p) = (1, n−2) 与 (n−3, n−2) 两个例外"""
    if ell == 0:
        return 1, n - 1 - (1 if (j, p) == (1, n - 2) else 0)
    return (1 if (j, p) == (n - 3, n - 2) else 0), n - 2


def _check_t(n: int, p: int, t: Sequence[int]) -> None:
    if len(t) != n or any(not 0 <= ti <= p - 1 for ti in t):
        raise ValueError(f"t 必须是 [0, {p - 1}]^{n} 中的元组，当前 {tuple(t)}")


# ========== Tate 上同调 ==========

def tate_char_B1(i: int, a: int, l: int, p: int) -> Optional[int]:
    """
    Ĥ^l(B₁, L(i)⊗(aω)) 的唯一权，或 None

    l 偶且 i ≡ a (p) 时为 lp − (i−a)；l 奇且 i ≡ p−2−a (p) 时为 lp + (i−(p−2−a))。
    """
    if not 0 <= i <= p - 2:
        raise ValueError(f"tate_char_B1 需要 0 ≤ i ≤ {p - 2}，当前 i={i}")
    if l % 2 == 0 and (i - a) % p == 0:
        return l * p - (i - a)
    if l % 2 == 1 and (i - (p - 2 - a)) % p == 0:
        return l * p + (i - (p - 2 - a))
    return None


def tate_char_Cj(n: int, p: int, j: int, t: Sequence[int], i: int) -> Optional[int]:
    """Ĥ^i(B₁, C_j^{(t)}) 的权 (q^{i mod 2} + i)·p，q 未定义时为 None"""
    _check_t(n, p, t)
    q = q_values(j, sum(t), p).get(i % 2)
    if q is None:
        return None
    return (q + i) * p


# ========== 预测器 ==========

@dataclass(frozen=True)
class CohomologyPrediction:
    """H^l(B₁, C_{jk}^{(t)}) = R1 ⊕ R2；R1 只知道权，重数可能为零"""
    l: int
    epsilon: int
    R1_weight: int
    R2_weight: Optional[int]
    q: QValue

    def divided(self, p: int) -> Tuple[int, Optional[int]]:
        """除以 p 后的 (R1, R2) 权"""
        return self.R1_weight // p, None if self.R2_weight is None else self.R2_weight // p

    def to_dict(self) -> Dict:
        return {
            "l": self.l,
            "epsilon": self.epsilon,
            "R1_weight": self.R1_weight,
            "R1_multiplicity": Constants.MULTIPLICITY_UNKNOWN,
            "R2_weight": self.R2_weight,
        }


def predict_cohomology(n: int, p: int, j: int, k: int, t: Sequence[int], l: int) -> CohomologyPrediction:
    """
    H^l(B₁, C_{jk}^{(t)}) 的闭式预测

    ε = [k > j]，ℓ ≡ l−k (2)：
    - l ≥ k 且 q^ℓ ≤ k−ε：R2 = (q^ℓ + l − k)·p
    - l ≤ k 且 q^{1−ℓ} > k−ε：R2 = (q^{1−ℓ} + l − k − 1)·p
    - 否则没有 R2
    l > n−3 只在 l > k 时接受（Tate 2-周期性）。
    """
    _check_range("j", j, 1, n - 3)
    _check_range("k", k, 1, n - 2)
    if l < 1:
        raise HypothesisError(f"需要 l ≥ 1，当前 l={l}")
    if l > n - 3 and l <= k:
        raise HypothesisError(f"l={l} > n−3 时需要 l > k={k}")
    _check_t(n, p, t)

    epsilon = 1 if k > j else 0
    q = q_values(j, sum(t), p)
    ell = (l - k) % 2
    r2: Optional[int] = None
    q_same = q.get(ell)
    q_other = q.get(1 - ell)
    if l >= k and q_same is not None and q_same <= k - epsilon:
        r2 = (q_same + l - k) * p
    elif l <= k and q_other is not None and q_other > k - epsilon:
        r2 = (q_other + l - k - 1) * p
    return CohomologyPrediction(l=l, epsilon=epsilon, R1_weight=(l - epsilon) * p, R2_weight=r2, q=q)


def m_lk(n: int, p: int, j: int, k: int, l: int) -> int:
    if (l - k) % 2 == 0:
        return 1
    if l > k and j == n - 3 and p == n - 2:
        return 1
    if l < k and j == 1 and p == n - 2:
        return 1
    return 0


@dataclass(frozen=True)
class WeightInterval:
    """[lo, hi]，lo > hi 表示空区间"""
    lo: int
    hi: int
    m: int

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def values(self) -> List[int]:
        return list(range(self.lo, self.hi + 1))

    def __contains__(self, r: int) -> bool:
        return self.lo <= r <= self.hi


def weight_interval(n: int, p: int, j: int, k: int, l: int, shifted: bool = True) -> WeightInterval:
    """
    (rpω)⊗S^p_+ 在 H^l(B₁, C_{jk}) 中出现的 r 的区间

    shifted=False 给出 K_{rl}^{Fr} 在 K_{jk}^{G₁} 中出现的区间（不减 ε）。
    """
    epsilon = (1 if k > j else 0) if shifted else 0
    if shifted and not 1 + epsilon <= l <= n - 3:
        raise HypothesisError(f"需要 {1 + epsilon} ≤ l ≤ {n - 3}，当前 l={l}")
    m = m_lk(n, p, j, k, l)
    if l > k:
        return WeightInterval(l - k + m, l - epsilon, m)
    if l == k:
        return WeightInterval(1, n - 3, m)
    return WeightInterval(l - epsilon, l - k + n - 2 - m, m)
