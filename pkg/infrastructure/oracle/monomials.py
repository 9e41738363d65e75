"""
S = k[x₁,y₁,…,xₙ,yₙ] 的单项式基与除幂算子

单项式是长度 2n 的指数元组 (a₁,b₁,…,aₙ,bₙ)，x_i 权 +1，y_i 权 −1。
e = Σ x_i ∂/∂y_i，f = Σ y_i ∂/∂x_i；除幂 e^{(m)} 在单项式上的作用为
Σ_{m₁+…+mₙ=m} Π C(b_i, m_i) x_i^{a_i+m_i} y_i^{b_i−m_i}（整数系数，调用方取模）。
"""
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterator, List, Sequence, Tuple

from infrastructure.linear.fp_matrix import FpMatrix

Monomial = Tuple[int, ...]

RAISE = "e"
LOWER = "f"


def monomial_weight(mono: Monomial) -> int:
    return sum(mono[0::2]) - sum(mono[1::2])


def pair_degrees(mono: Monomial) -> Tuple[int, ...]:
    return tuple(mono[2 * i] + mono[2 * i + 1] for i in range(len(mono) // 2))


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """total 拆成 parts 个非负整数，按字典序从大到小"""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class MonomialBasis:
    """S_d 的单项式基（字典序从大到小）"""
    n: int
    d: int
    monomials: List[Monomial] = field(default_factory=list)
    index: Dict[Monomial, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.monomials)


@lru_cache(maxsize=64)
def monomial_basis(n: int, d: int) -> MonomialBasis:
    """S_d 的基，大小为 C(d+2n−1, 2n−1)"""
    if n < 1 or d < 0:
        raise ValueError(f"需要 n ≥ 1, d ≥ 0，当前 n={n}, d={d}")
    monomials = list(_compositions(d, 2 * n))
    return MonomialBasis(n=n, d=d, monomials=monomials, index={m: i for i, m in enumerate(monomials)})


def pair_monomials(degrees: Sequence[int], weight: int) -> List[Monomial]:
    """
    给定每对 (x_i, y_i) 的次数 μ_i 与总权，列出所有单项式

    第 i 对取 x_i^{a_i} y_i^{μ_i−a_i}，约束 Σ(2a_i − μ_i) = weight。
    """
    total = sum(degrees) + weight
    if total % 2 or any(m < 0 for m in degrees):
        return []
    target = total // 2
    n = len(degrees)
    out: List[Monomial] = []

    # 后缀容量，用于剪枝
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + degrees[i]

    def rec(i: int, remaining: int, acc: List[int]) -> None:
        if i == n:
            if remaining == 0:
                out.append(tuple(acc))
            return
        lo = max(0, remaining - suffix[i + 1])
        hi = min(degrees[i], remaining)
        for a in range(hi, lo - 1, -1):
            acc.append(a)
            acc.append(degrees[i] - a)
            rec(i + 1, remaining - a, acc)
            acc.pop()
            acc.pop()

    if 0 <= target <= suffix[0]:
        rec(0, target, [])
    return out


def divided_power_on_monomial(op: str, order: int, mono: Monomial) -> Dict[Monomial, int]:
    """e^{(m)} 或 f^{(m)} 作用在单项式上，返回整数系数的线性组合"""
    if order == 0:
        return {mono: 1}
    n = len(mono) // 2
    # 每个变量对能承受的次数上限
    caps = [mono[2 * i + 1] if op == RAISE else mono[2 * i] for i in range(n)]
    if sum(caps) < order:
        return {}
    out: Dict[Monomial, int] = {}

    def rec(i: int, remaining: int, coeff: int, acc: List[int]) -> None:
        if i == n:
            if remaining == 0:
                out[tuple(acc)] = out.get(tuple(acc), 0) + coeff
            return
        a, b = mono[2 * i], mono[2 * i + 1]
        for m in range(min(caps[i], remaining) + 1):
            if op == RAISE:
                c = comb(b, m)
                acc.extend((a + m, b - m))
            else:
                c = comb(a, m)
                acc.extend((a - m, b + m))
            rec(i + 1, remaining - m, coeff * c, acc)
            del acc[-2:]

    rec(0, order, 1, [])
    return out


def divided_power_matrix(op: str, order: int, n: int, d: int, p: int) -> FpMatrix:
    """
    e^{(m)} / f^{(m)} 在 monomial_basis(n, d) 上的矩阵（列为源单项式）

    矩阵把权 w 的单项式送到权 w ± 2m。
    """
    if op not in (RAISE, LOWER):
        raise ValueError(f"算子必须是 e 或 f，当前 {op}")
    if order < 1:
        raise ValueError(f"除幂阶数必须 ≥ 1，当前 {order}")
    basis = monomial_basis(n, d)
    entries: Dict[Tuple[int, int], int] = {}
    for col, mono in enumerate(basis.monomials):
        for image, coeff in divided_power_on_monomial(op, order, mono).items():
            if coeff % p:
                entries[(basis.index[image], col)] = coeff
    return FpMatrix(p, len(basis), len(basis), entries)


def multiply_pair_power(mono: Monomial, pair: int, use_x: bool, exponent: int) -> Monomial:
    """单项式乘以 x_i^q 或 y_i^q"""
    out = list(mono)
    out[2 * pair + (0 if use_x else 1)] += exponent
    return tuple(out)


def sorted_partitions(total: int, parts: int, largest: int = None) -> Iterator[Tuple[int, ...]]:
    """total 拆成 parts 个非负整数的不增序列"""
    if largest is None:
        largest = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, largest), -1, -1):
        if first * parts < total:
            break
        for rest in sorted_partitions(total - first, parts - 1, first):
            yield (first,) + rest


def permutation_count(mu: Sequence[int]) -> int:
    """μ 的不同排列个数 n!/Π(重数!)"""
    result = factorial(len(mu))
    for mult in Counter(mu).values():
        result //= factorial(mult)
    return result
