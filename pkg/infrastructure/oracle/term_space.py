"""
分块张量空间 M ⊗ ΛᵃF ⊗ S(−g)

基向量的键为 (模基下标, 楔积指标集 I, 单项式)。两个分块不变量：
- μ：GL(F) 的多重次数，μ_i = [i ∈ I] + (x_i, y_i) 的次数
- 权：模基向量的权 + 单项式的权

G 的除幂算子保持 μ、把权平移 ±2m；等变微分保持 (μ, 权)。
所以所有线性代数都在单个 (μ, 权) 块内完成。
"""
import threading
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from infrastructure.characters.sl2_characters import WeightCharacter
from infrastructure.linear.fp_matrix import FpMatrix, SparseVector, check_prime, joint_kernel, span_rank
from infrastructure.oracle.explicit_module import ExplicitModule
from infrastructure.oracle.monomials import (
    LOWER,
    RAISE,
    Monomial,
    divided_power_on_monomial,
    multiply_pair_power,
    pair_monomials,
    permutation_count,
    sorted_partitions,
)
from utils.errors import OracleConsistencyError
from utils.simple_logger import get_logger

logger = get_logger("term_space")

Key = Tuple[int, Tuple[int, ...], Monomial]
MultiDegree = Tuple[int, ...]
BlockConstraint = Callable[[MultiDegree, int], FpMatrix]


@lru_cache(maxsize=200000)
def _divided_power(kind: str, order: int, mono: Monomial) -> Dict[Monomial, int]:
    # 返回值被缓存共享，调用方只读
    return divided_power_on_monomial(kind, order, mono)


def compositions_of(total: int, parts: int) -> Iterable[MultiDegree]:
    """total 拆成 parts 个非负整数的全部有序拆分"""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions_of(total - first, parts - 1):
            yield (first,) + rest


class TermSpace:
    """M ⊗ ΛᵃF ⊗ S(−g) 按 (μ, 权) 分块的基与算子"""

    def __init__(
        self,
        n: int,
        p: int,
        module: Optional[ExplicitModule] = None,
        wedge: int = 0,
        shift: int = 0,
        label: str = "",
    ):
        if not 0 <= wedge <= n:
            raise ValueError(f"楔积次数必须在 [0, {n}] 内，当前 {wedge}")
        self.n = n
        self.p = check_prime(p)
        self.module = module or ExplicitModule.trivial(p)
        self.wedge = wedge
        self.shift = shift
        self.label = label or f"{self.module.label}⊗Λ^{wedge}F(−{shift})"
        self._subsets = list(combinations(range(n), wedge))
        self._blocks: Dict[Tuple[MultiDegree, int], List[Key]] = {}
        self._indices: Dict[Tuple[MultiDegree, int], Dict[Key, int]] = {}
        self._module_columns: Dict[Tuple[str, int], List[Dict[int, int]]] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"TermSpace({self.label}, n={self.n}, p={self.p})"

    @property
    def subsets(self) -> List[Tuple[int, ...]]:
        return self._subsets

    # ========== 分块 ==========

    def multidegree_total(self, d: int) -> int:
        """内部次数 d 的块满足 |μ| = a + d − g"""
        return self.wedge + d - self.shift

    def block_basis(self, mu: MultiDegree, weight: int) -> List[Key]:
        key = (tuple(mu), weight)
        cached = self._blocks.get(key)
        if cached is not None:
            return cached
        basis: List[Key] = []
        for i_mod, w_mod in enumerate(self.module.weights):
            for subset in self._subsets:
                nu = [mu[t] - (1 if t in subset else 0) for t in range(self.n)]
                if min(nu) < 0:
                    continue
                for mono in pair_monomials(nu, weight - w_mod):
                    basis.append((i_mod, subset, mono))
        basis.sort()
        with self._lock:
            self._blocks[key] = basis
            self._indices[key] = {k: i for i, k in enumerate(basis)}
        return basis

    def block_index(self, mu: MultiDegree, weight: int) -> Dict[Key, int]:
        key = (tuple(mu), weight)
        if key not in self._indices:
            self.block_basis(mu, weight)
        return self._indices[key]

    def block_weights(self, mu: MultiDegree) -> List[int]:
        """块 μ 中可能出现的权（从大到小）"""
        total = sum(mu) - self.wedge
        if total < 0 or not self.module.weights:
            return []
        out = set()
        for w_mod in set(self.module.weights):
            for w in range(-total, total + 1, 2):
                out.add(w + w_mod)
        return sorted(out, reverse=True)

    def degree_blocks(self, d: int, sorted_only: bool = False) -> List[MultiDegree]:
        total = self.multidegree_total(d)
        if total < 0:
            return []
        if sorted_only:
            return list(sorted_partitions(total, self.n))
        return list(compositions_of(total, self.n))

    # ========== 算子 ==========

    def _module_column(self, kind: str, order: int) -> List[Dict[int, int]]:
        key = (kind, order)
        cached = self._module_columns.get(key)
        if cached is None:
            columns: List[Dict[int, int]] = [{} for _ in range(self.module.dim)]
            for (i, c), v in self.module.op(kind, order).entries.items():
                columns[c][i] = v
            cached = columns
            self._module_columns[key] = cached
        return cached

    def apply_to_key(self, kind: str, order: int, key: Key) -> Dict[Key, int]:
        """Δ(e^{(m)}) = Σ_s e^{(s)}_M ⊗ e^{(m−s)}_S 作用在一个基向量上（整数系数）"""
        i_mod, subset, mono = key
        out: Dict[Key, int] = {}
        for s in range(order + 1):
            column = self._module_column(kind, s)[i_mod]
            if not column:
                continue
            mono_part = _divided_power(kind, order - s, mono)
            for i2, v in column.items():
                for mono2, c in mono_part.items():
                    target = (i2, subset, mono2)
                    out[target] = out.get(target, 0) + v * c
        return out

    def operator_block(self, kind: str, order: int, mu: MultiDegree, weight: int) -> FpMatrix:
        """e^{(m)} / f^{(m)} 从块 (μ, w) 到块 (μ, w ± 2m) 的矩阵"""
        source = self.block_basis(mu, weight)
        shift = 2 * order if kind == RAISE else -2 * order
        target_basis = self.block_basis(mu, weight + shift)
        target_index = self.block_index(mu, weight + shift)
        entries: Dict[Tuple[int, int], int] = {}
        for col, key in enumerate(source):
            for image, coeff in self.apply_to_key(kind, order, key).items():
                if coeff % self.p == 0:
                    continue
                row = target_index.get(image)
                if row is None:
                    raise OracleConsistencyError(f"{self.label}: {kind}^({order}) 的像 {image} 不在目标块里")
                entries[(row, col)] = entries.get((row, col), 0) + coeff
        return FpMatrix(self.p, len(target_basis), len(source), entries)


class GradedInvariants:
    """
    (M ⊗ ΛᵃF ⊗ S(−g))^{G_r} 及其作为 S^{p^r}-模的极小生成元，逐次、逐块计算

    不变量 = 权 ≡ 0 (mod p^r) 且被 e^{(p^s)}, f^{(p^s)} (s < r) 及额外约束（例如微分）零化的向量。
    输出的权已除以 p^r。置换 (x_i, y_i) 对是整个结构的对称性，
    因此只在非增的 μ 上计算，再乘以排列数。
    """

    def __init__(
        self,
        space: TermSpace,
        r: int,
        constraints: Sequence[BlockConstraint] = (),
        threads: int = 1,
    ):
        if r < 1:
            raise ValueError(f"Frobenius 核的层数必须 ≥ 1，当前 r={r}")
        self.space = space
        self.r = r
        self.q = space.p ** r
        self.constraints = list(constraints)
        self.threads = max(1, threads)
        self._invariants: Dict[Tuple[MultiDegree, int], List[SparseVector]] = {}

    def block_invariants(self, mu: MultiDegree, weight: int) -> List[SparseVector]:
        key = (tuple(mu), weight)
        cached = self._invariants.get(key)
        if cached is not None:
            return cached
        space = self.space
        basis = space.block_basis(mu, weight)
        if weight % self.q or not basis:
            result: List[SparseVector] = []
        else:
            operators = []
            for s in range(self.r):
                for kind in (RAISE, LOWER):
                    m = space.p ** s
                    if space.block_basis(mu, weight + (2 * m if kind == RAISE else -2 * m)):
                        operators.append(space.operator_block(kind, m, mu, weight))
            operators.extend(c(tuple(mu), weight) for c in self.constraints)
            operators = [op for op in operators if op.rows]
            result = joint_kernel(operators, dim=len(basis), p=space.p)
        self._invariants[key] = result
        return result

    def _level_weights(self, mu: MultiDegree) -> List[int]:
        return [w for w in self.space.block_weights(mu) if w % self.q == 0]

    def _map_over(self, func, items: List) -> List:
        """线程池受 GIL 限制，只有 numpy 释放 GIL 的那部分能真正并行"""
        if self.threads == 1 or len(items) < 2:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(func, items))

    def invariant_character(self, d: int) -> WeightCharacter:
        """第 d 次不变量的特征标（权除以 p^r）"""
        blocks = [(mu, w) for mu in self.space.degree_blocks(d, sorted_only=True) for w in self._level_weights(mu)]
        dims = self._map_over(lambda b: len(self.block_invariants(*b)), blocks)
        out: Dict[int, int] = {}
        for (mu, w), dim in zip(blocks, dims):
            if dim:
                out[w // self.q] = out.get(w // self.q, 0) + dim * permutation_count(mu)
        logger.debug(f"{self.space.label} 第 {d} 次不变量", blocks=len(blocks), dim=sum(out.values()))
        return WeightCharacter(out)

    def block_generators(self, mu: MultiDegree, weight: int) -> int:
        """块 (μ, w) 中极小生成元的个数：不变量模去 x_i^q·(…)、y_i^q·(…) 的像"""
        invariants = self.block_invariants(mu, weight)
        if not invariants:
            return 0
        q = self.q
        space = self.space
        target_index = space.block_index(mu, weight)
        images: List[SparseVector] = []
        for i in range(space.n):
            if mu[i] < q:
                continue
            nu = tuple(m - q if t == i else m for t, m in enumerate(mu))
            for use_x, source_weight in ((True, weight - q), (False, weight + q)):
                source_basis = space.block_basis(nu, source_weight)
                for vec in self.block_invariants(nu, source_weight):
                    image = {}
                    for c, v in vec.items():
                        i_mod, subset, mono = source_basis[c]
                        shifted = (i_mod, subset, multiply_pair_power(mono, i, use_x, q))
                        image[target_index[shifted]] = v
                    images.append(image)
        if not images:
            return len(invariants)
        rank = span_rank(space.p, len(target_index), images)
        if rank > len(invariants):
            raise OracleConsistencyError(f"{space.label}: 块 {mu}, 权 {weight} 中 S^q 的像超出了不变量")
        return len(invariants) - rank

    def generator_character(self, d: int) -> WeightCharacter:
        """第 d 次极小生成元的特征标（权除以 p^r）"""
        blocks = [(mu, w) for mu in self.space.degree_blocks(d, sorted_only=True) for w in self._level_weights(mu)]
        dims = self._map_over(lambda b: self.block_generators(*b), blocks)
        out: Dict[int, int] = {}
        for (mu, w), dim in zip(blocks, dims):
            if dim:
                out[w // self.q] = out.get(w // self.q, 0) + dim * permutation_count(mu)
        return WeightCharacter(out)

    def graded_character(self, max_degree: int) -> Dict[int, WeightCharacter]:
        return {d: self.invariant_character(d) for d in range(max_degree + 1)}

    def graded_generators(self, max_degree: int) -> Dict[int, WeightCharacter]:
        return {d: self.generator_character(d) for d in range(max_degree + 1)}
