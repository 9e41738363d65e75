"""
模 p 的 SL₂ 特征标演算

权以 ω 的整数倍表示。这里只处理特征标（形式和），不构造模本身；
显式模在 infrastructure/oracle/explicit_module.py 中。
"""
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from utils.errors import (
    AsymmetricCharacterError,
    GoodFiltrationError,
    HypothesisError,
    NotTiltingCharacterError,
)


class WeightCharacter(Mapping):
    """
    权 → 重数 的有限形式和

    允许负系数（交错和中间结果），is_effective() 检查是否为真特征标。
    不可变；缺失的权读出 0。
    """

    __slots__ = ("_mult", "_hash")

    def __init__(self, mult: Optional[Mapping[int, int]] = None):
        self._mult: Dict[int, int] = {int(w): int(m) for w, m in (mult or {}).items() if m}
        self._hash: Optional[int] = None

    @classmethod
    def single(cls, weight: int, mult: int = 1) -> "WeightCharacter":
        return cls({weight: mult})

    def __getitem__(self, weight: int) -> int:
        return self._mult.get(weight, 0)

    def __contains__(self, weight) -> bool:
        return weight in self._mult

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._mult, reverse=True))

    def __len__(self) -> int:
        return len(self._mult)

    def __eq__(self, other) -> bool:
        if isinstance(other, WeightCharacter):
            return self._mult == other._mult
        if isinstance(other, Mapping):
            return self._mult == {w: m for w, m in other.items() if m}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._mult.items()))
        return self._hash

    def __add__(self, other: "WeightCharacter") -> "WeightCharacter":
        out = dict(self._mult)
        for w, m in other.items():
            out[w] = out.get(w, 0) + m
        return WeightCharacter(out)

    def __sub__(self, other: "WeightCharacter") -> "WeightCharacter":
        return self + other.scale(-1)

    def __mul__(self, other: "WeightCharacter") -> "WeightCharacter":
        """特征标乘积（张量积）"""
        out: Dict[int, int] = {}
        for w1, m1 in self._mult.items():
            for w2, m2 in other.items():
                out[w1 + w2] = out.get(w1 + w2, 0) + m1 * m2
        return WeightCharacter(out)

    def scale(self, factor: int) -> "WeightCharacter":
        return WeightCharacter({w: m * factor for w, m in self._mult.items()})

    def shift_weights(self, factor: int) -> "WeightCharacter":
        """每个权乘以 factor"""
        return WeightCharacter({w * factor: m for w, m in self._mult.items()})

    def divide_weights(self, q: int) -> "WeightCharacter":
        """每个权除以 q（要求整除）"""
        if any(w % q for w in self._mult):
            raise ValueError(f"存在不能被 {q} 整除的权: {self.to_dict()}")
        return WeightCharacter({w // q: m for w, m in self._mult.items()})

    def restrict(self, predicate) -> "WeightCharacter":
        return WeightCharacter({w: m for w, m in self._mult.items() if predicate(w)})

    @property
    def dim(self) -> int:
        return sum(self._mult.values())

    @property
    def highest_weight(self) -> Optional[int]:
        return max(self._mult) if self._mult else None

    def is_effective(self) -> bool:
        return all(m > 0 for m in self._mult.values())

    def is_symmetric(self) -> bool:
        return all(self._mult.get(-w, 0) == m for w, m in self._mult.items())

    def to_dict(self) -> Dict[int, int]:
        return {w: self._mult[w] for w in self}

    def __repr__(self) -> str:
        body = ", ".join(f"{w}:{m}" for w, m in self.to_dict().items())
        return "{" + body + "}"


class TiltingMultiset(Mapping):
    """最高权 l → 重数，表示 ⊕ T(l)^{⊕mult}（fusion_product 中解读为单模 L(l)）"""

    __slots__ = ("_mult",)

    def __init__(self, mult: Optional[Mapping[int, int]] = None):
        self._mult: Dict[int, int] = {}
        for l, m in (mult or {}).items():
            if m < 0 or l < 0:
                raise ValueError(f"tilting 重数与最高权必须非负: T({l})^{m}")
            if m:
                self._mult[int(l)] = int(m)

    def __getitem__(self, l: int) -> int:
        return self._mult.get(l, 0)

    def __contains__(self, l) -> bool:
        return l in self._mult

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._mult, reverse=True))

    def __len__(self) -> int:
        return len(self._mult)

    def __eq__(self, other) -> bool:
        if isinstance(other, TiltingMultiset):
            return self._mult == other._mult
        if isinstance(other, Mapping):
            return self._mult == {l: m for l, m in other.items() if m}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._mult.items()))

    def __add__(self, other: "TiltingMultiset") -> "TiltingMultiset":
        out = dict(self._mult)
        for l, m in other.items():
            out[l] = out.get(l, 0) + m
        return TiltingMultiset(out)

    def support(self) -> List[int]:
        return sorted(self._mult)

    def character(self, p: int) -> WeightCharacter:
        total = WeightCharacter()
        for l, m in self._mult.items():
            total = total + char_tilting(l, p).scale(m)
        return total

    def dimension(self, p: int) -> int:
        return sum(m * char_tilting(l, p).dim for l, m in self._mult.items())

    def to_dict(self) -> Dict[int, int]:
        return {l: self._mult[l] for l in self}

    def format(self, symbol: str = "T") -> str:
        if not self._mult:
            return "0"
        parts = []
        for l in self:
            m = self._mult[l]
            parts.append(f"{symbol}({l})" if m == 1 else f"{m}·{symbol}({l})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"TiltingMultiset({self.to_dict()})"


def _require_prime_at_least_3(p: int) -> None:
    if p < 3:
        raise HypothesisError(f"需要素数 p ≥ 3，当前 p={p}")


@lru_cache(maxsize=None)
def char_weyl(m: int) -> WeightCharacter:
    """χ(m) = char S^mV：权 m, m−2, …, −m 各一次"""
    if m < 0:
        raise ValueError(f"char_weyl 需要 m ≥ 0，当前 m={m}")
    return WeightCharacter({m - 2 * i: 1 for i in range(m + 1)})


def tilting_normal_form(j: int, p: int) -> Tuple[int, int]:
    """
    j = j₁ + p·j₂ 的规范分解

    j ≤ p−2 时为 (j, 0)；否则 j₁ ∈ [p−1, 2p−2]。
    """
    if j < 0:
        raise ValueError(f"需要 j ≥ 0，当前 j={j}")
    if j <= p - 2:
        return j, 0
    j1 = (j - (p - 1)) % p + (p - 1)
    return j1, (j - j1) // p


@lru_cache(maxsize=None)
def char_tilting(j: int, p: int) -> WeightCharacter:
    """
    char T(j)

    j ≤ p−1: χ(j)；p ≤ j ≤ 2p−2: χ(j) + χ(2p−2−j)；
    否则 char T(j₁) · Fr(char T(j₂))。
    """
    _require_prime_at_least_3(p)
    if j < 0:
        raise ValueError(f"需要 j ≥ 0，当前 j={j}")
    if j <= p - 1:
        return char_weyl(j)
    if j <= 2 * p - 2:
        return char_weyl(j) + char_weyl(2 * p - 2 - j)
    j1, j2 = tilting_normal_form(j, p)
    return char_tilting(j1, p) * frobenius_scale(char_tilting(j2, p), 1, p)


def frobenius_scale(c: WeightCharacter, r: int, p: int) -> WeightCharacter:
    """Frobenius 扭 r 次：每个权乘以 p^r"""
    if r < 0:
        raise ValueError(f"需要 r ≥ 0，当前 r={r}")
    return c.shift_weights(p ** r)


def decompose_into_tiltings(c: WeightCharacter, p: int) -> TiltingMultiset:
    """
    按最高权贪心剥离 tilting 特征标

    :raises NotTiltingCharacterError: 剥离过程中出现负重数或只剩负权
    """
    _require_prime_at_least_3(p)
    residual: Dict[int, int] = dict(c.items())
    result: Dict[int, int] = {}
    while residual:
        top = max(residual)
        m = residual[top]
        if m < 0 or top < 0:
            raise NotTiltingCharacterError(
                f"不是 tilting 特征标: 权 {top} 处剩余重数 {m}（输入 {c!r}）"
            )
        result[top] = m
        for w, k in char_tilting(top, p).items():
            left = residual.get(w, 0) - m * k
            if left:
                residual[w] = left
            else:
                residual.pop(w, None)
    return TiltingMultiset(result)


def tensor_tiltings(ls: Sequence[int], p: int) -> TiltingMultiset:
    """⊗ T(l_i) 的 tilting 分解"""
    product = WeightCharacter({0: 1})
    for l in ls:
        product = product * char_tilting(l, p)
    return decompose_into_tiltings(product, p)


def tilting_pieri(a: int, p: int) -> TiltingMultiset:
    """T(a) ⊗ T(1) 的闭式分解，p−1 ≤ a ≤ 3p−3"""
    _require_prime_at_least_3(p)
    if not (p - 1 <= a <= 3 * p - 3):
        raise ValueError(f"tilting_pieri 需要 {p - 1} ≤ a ≤ {3 * p - 3}，当前 a={a}")
    if a in (p - 1, 2 * p - 1):
        return TiltingMultiset({a + 1: 1})
    if a in (p, 2 * p):
        return TiltingMultiset({a + 1: 1, a - 1: 2})
    return TiltingMultiset({a + 1: 1, a - 1: 1})


def fusion_product(cs: Sequence[int], p: int) -> TiltingMultiset:
    """
    单模的 fusion 积 L(c₁) ⊗̲ … ⊗̲ L(c_m)

    丢弃最高权 ≥ p−1 的 tilting 直和项（G₁-投射部分），其余 l 解读为 L(l)。
    """
    _require_prime_at_least_3(p)
    for c in cs:
        if not (0 <= c <= p - 2):
            raise ValueError(f"fusion_product 的指标必须在 [0, {p - 2}] 内，当前 {c}")
    full = tensor_tiltings(list(cs), p)
    return TiltingMultiset({l: m for l, m in full.items() if l <= p - 2})


def g1_invariants_tilting(l: int, p: int) -> TiltingMultiset:
    """
    T(l)^{G₁} 作为 G^{(1)}-tilting 模

    l = 0 或 l₁ = 2p−2 时为 T(l₂)，其余情形为 0。
    """
    _require_prime_at_least_3(p)
    if l == 0:
        return TiltingMultiset({0: 1})
    l1, l2 = tilting_normal_form(l, p)
    if l1 == 2 * p - 2:
        return TiltingMultiset({l2: 1})
    return TiltingMultiset()


def weyl_expand(c: WeightCharacter) -> Dict[int, int]:
    """按 Weyl 特征标 χ(m) 展开：coeff(m) = c(m) − c(m+2)"""
    if not c.is_symmetric():
        raise AsymmetricCharacterError(f"特征标不对称，无法按 Weyl 特征标展开: {c!r}")
    out: Dict[int, int] = {}
    top = c.highest_weight
    if top is None:
        return out
    for m in range(top + 1):
        coeff = c[m] - c[m + 2]
        if coeff:
            out[m] = coeff
    return out


def invariant_multiplicity(c: WeightCharacter) -> int:
    """
    带好滤过模的 G-不变量维数 = χ(0) 的系数

    :raises GoodFiltrationError: 系数为负
    """
    value = weyl_expand(c).get(0, 0)
    if value < 0:
        raise GoodFiltrationError(f"χ(0) 的系数为 {value} < 0，输入没有好滤过: {c!r}")
    return value


@lru_cache(maxsize=None)
def char_symmetric_power_S(n: int, d: int) -> WeightCharacter:
    """
    S_d 的特征标，S = k[x₁,y₁,…,xₙ,yₙ]

    x 的次数为 a、y 的次数为 b（a+b=d）的部分权为 a−b，
    重数 C(a+n−1,n−1)·C(b+n−1,n−1)。
    """
    if n < 1 or d < 0:
        return WeightCharacter()
    return WeightCharacter({a - (d - a): comb(a + n - 1, n - 1) * comb(d - a + n - 1, n - 1) for a in range(d + 1)})


def total_character(chars: Iterable[WeightCharacter]) -> WeightCharacter:
    total = WeightCharacter()
    for c in chars:
        total = total + c
    return total
