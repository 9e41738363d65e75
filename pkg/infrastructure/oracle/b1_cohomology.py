"""
B₁-上同调的直接计算

对有界的 B-表示复形 C（每项给出权与 F 的矩阵），U₁-上同调由双复形
    K^{c,h} = C^c ⊗ (tw(h)ω),  tw(2m) = 2mp,  tw(2m+1) = 2mp + 2
的全复形计算，水平方向偶数列出发的映射为 F，奇数列出发的为 F^{p−1}，
总微分 D = d_C + (−1)^c·δ。再取 H₁-不变量（权 ≡ 0 mod p）并把权除以 p。
普通上同调只用 h ≥ 0 的列；Tate 上同调用全部列（每个总次数仍是有限维的）。
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from infrastructure.characters.sl2_characters import WeightCharacter
from infrastructure.linear.fp_matrix import FpMatrix, check_prime
from infrastructure.oracle.monomials import LOWER, divided_power_on_monomial, monomial_weight
from utils.errors import OracleConsistencyError
from utils.simple_logger import get_logger

logger = get_logger("b1_cohomology")


@dataclass
class BTerm:
    """一个有限维 B-表示：基向量的权与 F（权 −2）的矩阵"""
    weights: List[int]
    lower: FpMatrix

    @property
    def dim(self) -> int:
        return len(self.weights)


@dataclass
class BComplex:
    """上同调编号的有界复形；differentials[c]: C^c → C^{c+1}"""
    p: int
    terms: Dict[int, BTerm] = field(default_factory=dict)
    differentials: Dict[int, FpMatrix] = field(default_factory=dict)
    label: str = ""

    @classmethod
    def single(cls, p: int, weights: Sequence[int], lower: Optional[FpMatrix] = None, position: int = 0) -> "BComplex":
        """集中在一个位置的复形；默认 F = 0"""
        dim = len(weights)
        term = BTerm(list(weights), lower if lower is not None else FpMatrix.zero(p, dim, dim))
        return cls(p=p, terms={position: term}, label=f"{list(weights)}@{position}")

    def positions(self) -> List[int]:
        return sorted(self.terms)

    def differential(self, c: int) -> Optional[FpMatrix]:
        if c not in self.terms or c + 1 not in self.terms:
            return None
        return self.differentials.get(c)

    def validate(self) -> None:
        """检查 F^p = 0、d² = 0、d 与 F 交换以及权的相容性"""
        p = self.p
        for c, term in self.terms.items():
            if not term.lower.power(p).is_zero():
                raise OracleConsistencyError(f"{self.label}: 位置 {c} 上 F^p ≠ 0，不是 B₁-表示")
            for (i, col) in term.lower.entries:
                if term.weights[i] != term.weights[col] - 2:
                    raise OracleConsistencyError(f"{self.label}: 位置 {c} 上 F 的权不相容")
        for c in self.positions():
            d = self.differential(c)
            if d is None:
                continue
            target = self.terms[c + 1]
            for (i, col) in d.entries:
                if target.weights[i] != self.terms[c].weights[col]:
                    raise OracleConsistencyError(f"{self.label}: 微分 d^{c} 不保持权")
            if not (d @ self.terms[c].lower - target.lower @ d).is_zero():
                raise OracleConsistencyError(f"{self.label}: 微分 d^{c} 与 F 不交换")
            after = self.differential(c + 1)
            if after is not None and not (after @ d).is_zero():
                raise OracleConsistencyError(f"{self.label}: d^{c + 1}∘d^{c} ≠ 0")


def horizontal_twist(h: int, p: int) -> int:
    """第 h 列的权平移 tw(h)"""
    m, odd = divmod(h, 2)
    return 2 * m * p + (2 if odd else 0)


class _TotalComplex:
    """全复形的分量与按权分块的微分"""

    def __init__(self, complex_: BComplex, tate: bool):
        self.cx = complex_
        self.p = complex_.p
        self.tate = tate
        self._lower_powers: Dict[int, FpMatrix] = {}

    def components(self, l: int) -> List[Tuple[int, int]]:
        """总次数 l 的分量 (c, h)"""
        out = []
        for c in self.cx.positions():
            h = l - c
            if self.tate or h >= 0:
                out.append((c, h))
        return out

    def _horizontal(self, c: int, h: int) -> FpMatrix:
        """从第 h 列出发的水平映射"""
        term = self.cx.terms[c]
        if h % 2 == 0:
            return term.lower
        if c not in self._lower_powers:
            self._lower_powers[c] = term.lower.power(self.p - 1)
        return self._lower_powers[c]

    def basis_by_weight(self, l: int) -> Dict[int, List[Tuple[int, int, int]]]:
        """权 → [(c, h, 下标)]"""
        out: Dict[int, List[Tuple[int, int, int]]] = {}
        for c, h in self.components(l):
            shift = horizontal_twist(h, self.p)
            for idx, w in enumerate(self.cx.terms[c].weights):
                out.setdefault(w + shift, []).append((c, h, idx))
        return out

    def block_rank(self, l: int, weight: int, source: List, target: List) -> int:
        """D_l 在给定权上的秩"""
        if not source or not target:
            return 0
        target_index = {key: i for i, key in enumerate(target)}
        entries: Dict[Tuple[int, int], int] = {}
        # 按分量缓存矩阵列
        columns_cache: Dict[Tuple[str, int, int], Dict[int, Dict[int, int]]] = {}

        def column(kind: str, c: int, h: int, mat: FpMatrix) -> Dict[int, Dict[int, int]]:
            key = (kind, c, h)
            if key not in columns_cache:
                cols: Dict[int, Dict[int, int]] = {}
                for (i, col), v in mat.entries.items():
                    cols.setdefault(col, {})[i] = v
                columns_cache[key] = cols
            return columns_cache[key]

        for col_pos, (c, h, idx) in enumerate(source):
            d = self.cx.differential(c)
            if d is not None:
                for i, v in column("d", c, h, d).get(idx, {}).items():
                    row = target_index.get((c + 1, h, i))
                    if row is not None:
                        entries[(row, col_pos)] = entries.get((row, col_pos), 0) + v
            if self.tate or h + 1 >= 0:
                sign = -1 if c % 2 else 1
                for i, v in column("h", c, h, self._horizontal(c, h)).get(idx, {}).items():
                    row = target_index.get((c, h + 1, i))
                    if row is not None:
                        entries[(row, col_pos)] = entries.get((row, col_pos), 0) + sign * v
        return FpMatrix(self.p, len(target), len(source), entries).rank()

    def cohomology(self, l: int) -> WeightCharacter:
        here = self.basis_by_weight(l)
        after = self.basis_by_weight(l + 1)
        before = self.basis_by_weight(l - 1)
        out: Dict[int, int] = {}
        for weight, basis in here.items():
            if weight % self.p:
                continue
            dim = len(basis) - self.block_rank(l, weight, basis, after.get(weight, []))
            dim -= self.block_rank(l - 1, weight, before.get(weight, []), basis)
            if dim < 0:
                raise OracleConsistencyError(f"{self.cx.label}: H^{l} 在权 {weight} 处维数为负")
            if dim:
                out[weight // self.p] = dim
        return WeightCharacter(out)


def b1_cohomology_oracle(complex_: BComplex, l: int, validate: bool = True) -> WeightCharacter:
    """
    H^l(B₁, C) 作为 B^{(1)}-特征标（权已除以 p）

    :raises OracleConsistencyError: F^p ≠ 0 或复形不相容
    """
    if validate:
        complex_.validate()
    return _TotalComplex(complex_, tate=False).cohomology(l)


def tate_cohomology_oracle(complex_: BComplex, l: int, validate: bool = True) -> WeightCharacter:
    """Ĥ^l(B₁, C)，权已除以 p"""
    if validate:
        complex_.validate()
    return _TotalComplex(complex_, tate=True).cohomology(l)


def b1_cohomology_range(complex_: BComplex, degrees: Sequence[int], tate: bool = False) -> Dict[int, WeightCharacter]:
    """一次校验，多个次数"""
    complex_.validate()
    total = _TotalComplex(complex_, tate=tate)
    return {l: total.cohomology(l) for l in degrees}


def simple_b_module(i: int, a: int, p: int) -> BComplex:
    """L(i) ⊗ (aω)，基为 u^{i−s}v^s，F = v∂/∂u"""
    monos = _line_monomials(i)
    index = {m: k for k, m in enumerate(monos)}
    entries = {}
    for col, mono in enumerate(monos):
        for image, coeff in divided_power_on_monomial(LOWER, 1, mono).items():
            entries[(index[image], col)] = coeff
    lower = FpMatrix(p, len(monos), len(monos), entries)
    return BComplex.single(p, [monomial_weight(m) + a for m in monos], lower)


def _line_monomials(t: int) -> List[Tuple[int, int]]:
    return [(t - s, s) for s in range(t + 1)] if t >= 0 else []


def build_cj_complex(n: int, p: int, j: int, t: Sequence[int], k: Optional[int] = None) -> BComplex:
    """
    C_j^{(t)} = ⊗_i (L(t_i−1)⊗(−ω) --y_i--> L(t_i)) ⊗ (jω)，或其截断 C_{jk}^{(t)}

    L(t) 是 k[x_i, y_i] 的 t 次部分，F = Σ y_i ∂/∂x_i 按导子作用。
    子集 I 的分量 ⊗_{i∈I} L(t_i−1) ⊗_{i∉I} L(t_i) 位于 −|I|；
    k 给出时只保留 |I| ≤ k，并放在 k − |I| 处。
    """
    check_prime(p)
    if len(t) != n or any(not 0 <= ti <= p - 1 for ti in t):
        raise ValueError(f"t 必须是 [0, {p - 1}]^{n} 中的元组，当前 {tuple(t)}")
    sizes = range(n + 1) if k is None else range(min(k, n) + 1)

    def position(size: int) -> int:
        return -size if k is None else k - size

    # 每个位置的基：(子集, 单项式)
    bases: Dict[int, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = {}
    for size in sizes:
        basis = []
        for subset in combinations(range(n), size):
            degrees = [t[i] - (1 if i in subset else 0) for i in range(n)]
            if min(degrees) < 0:
                continue
            for mono in _all_monomials(degrees):
                basis.append((subset, mono))
        bases[position(size)] = basis

    cx = BComplex(p=p, label=f"C_{{{j}{'' if k is None else k}}}^{tuple(t)}")
    for c, basis in bases.items():
        index = {key: i for i, key in enumerate(basis)}
        weights = [monomial_weight(mono) - len(subset) + j for subset, mono in basis]
        entries: Dict[Tuple[int, int], int] = {}
        for col, (subset, mono) in enumerate(basis):
            for image, coeff in divided_power_on_monomial(LOWER, 1, mono).items():
                if coeff % p:
                    entries[(index[(subset, image)], col)] = coeff
        cx.terms[c] = BTerm(weights, FpMatrix(p, len(basis), len(basis), entries))

    # d: I → I∖{i}，乘以 y_i，符号 (−1)^{#{m ∈ I : m < i}}
    for c, basis in bases.items():
        target_c = c + 1
        if target_c not in bases:
            continue
        target_index = {key: i for i, key in enumerate(bases[target_c])}
        entries = {}
        for col, (subset, mono) in enumerate(basis):
            for pos, i in enumerate(subset):
                smaller = subset[:pos] + subset[pos + 1:]
                image = list(mono)
                image[2 * i + 1] += 1
                row = target_index[(smaller, tuple(image))]
                entries[(row, col)] = -1 if pos % 2 else 1
        cx.differentials[c] = FpMatrix(p, len(bases[target_c]), len(basis), entries)
    logger.debug(f"构造 {cx.label}", dims={c: len(b) for c, b in sorted(bases.items())})
    return cx


def _all_monomials(degrees: Sequence[int]) -> List[Tuple[int, ...]]:
    """每对 (x_i, y_i) 次数固定的全部单项式"""
    out: List[Tuple[int, ...]] = [()]
    for deg in degrees:
        out = [m + (deg - s, s) for m in out for s in range(deg + 1)]
    return out
