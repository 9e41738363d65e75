"""
M_j 的等变分次分解的项

第 u 项（同调位置 −u，u = 0..n−1）为 T(w) ⊗ ΛᵃF ⊗ S(−g)：
- u ≤ j:      w = j−u, a = u, g = u
- 之后跳过 Λ^{j+1}: w = 0, a = j+2, g = j+2
- 再之后:     w = a', a = j+2+a', g = j+2+a'，a' = 1..n−j−2
"""
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Tuple

from infrastructure.characters.sl2_characters import WeightCharacter, char_symmetric_power_S, char_weyl


@dataclass(frozen=True)
class ResolutionTerm:
    """分解中的一项 T(w) ⊗ ΛᵃF ⊗ S(−g)，位于同调位置 −index"""
    index: int
    tilting_weight: int
    wedge: int
    shift: int

    @property
    def position(self) -> int:
        return -self.index

    @property
    def twist(self) -> int:
        """内部扭 S(−g) 中的 −g"""
        return -self.shift

    def generator_character(self, n: int) -> WeightCharacter:
        """生成元 T(w) ⊗ ΛᵃF 的特征标（T(w) = χ(w)，因为 w ≤ n−3 ≤ p−1）"""
        return char_weyl(self.tilting_weight).scale(comb(n, self.wedge))

    def character_in_degree(self, n: int, d: int) -> WeightCharacter:
        """第 d 次部分的特征标 C(n,a)·χ(w)·char S_{d−g}"""
        if d < self.shift:
            return WeightCharacter()
        return self.generator_character(n) * char_symmetric_power_S(n, d - self.shift)

    def label(self) -> str:
        return f"T({self.tilting_weight})⊗Λ^{self.wedge}F(−{self.shift})"


@lru_cache(maxsize=None)
def resolution_terms(n: int, j: int) -> Tuple[ResolutionTerm, ...]:
    """按同调位置 0, −1, …, −(n−1) 排列的 n 个项"""
    if not 1 <= j <= n - 3:
        raise ValueError(f"需要 1 ≤ j ≤ n−3，当前 n={n}, j={j}")
    terms = [ResolutionTerm(u, j - u, u, u) for u in range(j + 1)]
    terms.append(ResolutionTerm(j + 1, 0, j + 2, j + 2))
    for extra in range(1, n - j - 1):
        terms.append(ResolutionTerm(j + 1 + extra, extra, j + 2 + extra, j + 2 + extra))
    return tuple(terms)
