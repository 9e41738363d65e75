"""
显式 SL₂-模：基、权、以及除幂算子 e^{(m)}, f^{(m)} 的矩阵

tilting 模 T(j) 的构造：
- j ≤ p−1: SʲV
- p ≤ j ≤ 2p−2: S^{p−1}V ⊗ S^{j−p+1}V 中 Casimir 在 j(j+2)/2 处的广义特征子空间
- 其余: T(j₁) ⊗ T(j₂)^{Fr}，j = j₁ + p·j₂ 为规范分解
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

from infrastructure.characters.sl2_characters import WeightCharacter, char_tilting, tilting_normal_form
from infrastructure.linear.fp_matrix import FpMatrix, SparseVector, inv_modp
from infrastructure.oracle.monomials import LOWER, RAISE, divided_power_matrix, monomial_basis, monomial_weight
from utils.errors import OracleConsistencyError
from utils.simple_logger import get_logger

logger = get_logger("explicit_module")


def kron(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    """Kronecker 积，行列下标为 i·dim_b + k"""
    if a.p != b.p:
        raise ValueError(f"模数不一致: {a.p} 与 {b.p}")
    entries = {}
    b_entries = b.entries
    for (i, j), v in a.entries.items():
        for (k, l), w in b_entries.items():
            entries[(i * b.rows + k, j * b.cols + l)] = v * w
    return FpMatrix(a.p, a.rows * b.rows, a.cols * b.cols, entries)


@dataclass
class ExplicitModule:
    """
    有限维 SL₂-模的显式实现

    raise_ops[m] / lower_ops[m] 是 e^{(m)} / f^{(m)}（1 ≤ m ≤ max_order），
    列为源基向量。超过权跨度的阶数恒为零，不必存储。
    """
    p: int
    weights: List[int]
    max_order: int
    raise_ops: Dict[int, FpMatrix] = field(default_factory=dict)
    lower_ops: Dict[int, FpMatrix] = field(default_factory=dict)
    label: str = ""

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def weight_span(self) -> int:
        """最大可能非零的除幂阶数"""
        if not self.weights:
            return 0
        return (max(self.weights) - min(self.weights)) // 2

    def character(self) -> WeightCharacter:
        out: Dict[int, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return WeightCharacter(out)

    def op(self, kind: str, order: int) -> FpMatrix:
        """
        e^{(m)} 或 f^{(m)}；m = 0 返回单位阵

        :raises ValueError: 阶数超过 max_order 且可能非零
        """
        if order == 0:
            return FpMatrix.identity(self.p, self.dim)
        if order > self.weight_span:
            return FpMatrix.zero(self.p, self.dim, self.dim)
        if order > self.max_order:
            raise ValueError(f"{self.label or '模'} 只带有 ≤ {self.max_order} 阶的除幂，请求 {order} 阶")
        ops = self.raise_ops if kind == RAISE else self.lower_ops
        return ops[order]

    def check_weight_shift(self) -> None:
        """检查 e^{(m)} 把权 w 送到 w+2m，f^{(m)} 送到 w−2m"""
        for kind, ops, sign in ((RAISE, self.raise_ops, 1), (LOWER, self.lower_ops, -1)):
            for m, mat in ops.items():
                for (i, c) in mat.entries:
                    if self.weights[i] != self.weights[c] + sign * 2 * m:
                        raise OracleConsistencyError(
                            f"{self.label}: {kind}^({m}) 把权 {self.weights[c]} 送到了 {self.weights[i]}"
                        )

    # ========== 构造 ==========

    @classmethod
    def trivial(cls, p: int, max_order: int = 1) -> "ExplicitModule":
        return cls(p=p, weights=[0], max_order=max_order, label="T(0)")

    @classmethod
    def symmetric_power(cls, j: int, p: int, max_order: int = 1) -> "ExplicitModule":
        """SʲV，基为 u^{j−i}v^i"""
        basis = monomial_basis(1, j)
        weights = [monomial_weight(m) for m in basis.monomials]
        top = min(max_order, j)
        return cls(
            p=p,
            weights=weights,
            max_order=max_order,
            raise_ops={m: divided_power_matrix(RAISE, m, 1, j, p) for m in range(1, top + 1)},
            lower_ops={m: divided_power_matrix(LOWER, m, 1, j, p) for m in range(1, top + 1)},
            label=f"S^{j}V",
        )

    def tensor(self, other: "ExplicitModule") -> "ExplicitModule":
        """张量积，除幂按余乘 Δe^{(m)} = Σ e^{(s)}⊗e^{(m−s)}"""
        if self.p != other.p:
            raise ValueError(f"模数不一致: {self.p} 与 {other.p}")
        max_order = min(self.max_order, other.max_order)
        weights = [w1 + w2 for w1 in self.weights for w2 in other.weights]
        span = (max(weights) - min(weights)) // 2 if weights else 0
        ops: Dict[str, Dict[int, FpMatrix]] = {RAISE: {}, LOWER: {}}
        for kind in (RAISE, LOWER):
            for m in range(1, min(max_order, span) + 1):
                total = FpMatrix.zero(self.p, len(weights), len(weights))
                for s in range(m + 1):
                    left, right = self.op(kind, s), other.op(kind, m - s)
                    if left.is_zero() or right.is_zero():
                        continue
                    total = total + kron(left, right)
                ops[kind][m] = total
        return ExplicitModule(
            p=self.p,
            weights=weights,
            max_order=max_order,
            raise_ops=ops[RAISE],
            lower_ops=ops[LOWER],
            label=f"{self.label}⊗{other.label}",
        )

    def frobenius_twist(self) -> "ExplicitModule":
        """M^{Fr}：权乘 p，e^{(m)} 在 p∤m 时为零，否则为 e^{(m/p)}"""
        p = self.p
        max_order = (self.max_order + 1) * p - 1
        span = self.weight_span * p
        ops: Dict[str, Dict[int, FpMatrix]] = {RAISE: {}, LOWER: {}}
        for kind in (RAISE, LOWER):
            for m in range(1, min(max_order, span) + 1):
                ops[kind][m] = self.op(kind, m // p) if m % p == 0 else FpMatrix.zero(p, self.dim, self.dim)
        return ExplicitModule(
            p=p,
            weights=[w * p for w in self.weights],
            max_order=max_order,
            raise_ops=ops[RAISE],
            lower_ops=ops[LOWER],
            label=f"({self.label})^Fr",
        )

    def casimir(self) -> FpMatrix:
        """C = ef + fe + h²/2，作用在每个 Weyl 截面 ∇(m) 上为 m(m+2)/2"""
        p = self.p
        e, f = self.op(RAISE, 1), self.op(LOWER, 1)
        half = inv_modp(2, p)
        h_sq = FpMatrix(p, self.dim, self.dim, {(i, i): w * w * half for i, w in enumerate(self.weights)})
        return e @ f + f @ e + h_sq

    def restrict(self, basis: Sequence[SparseVector], free_columns: Sequence[int]) -> "ExplicitModule":
        """
        限制到 G-稳定子空间

        :param basis: 子空间的规范基（第 i 个向量在 free_columns[i] 处为 1，在其它自由列上为 0）
        :param free_columns: 对应的自由列
        :raises OracleConsistencyError: 子空间在某个算子下不稳定
        """
        p = self.p
        position = {c: i for i, c in enumerate(free_columns)}
        weights = [self.weights[c] for c in free_columns]

        def restrict_op(mat: FpMatrix, kind: str, m: int) -> FpMatrix:
            columns = []
            for vec in basis:
                image = mat.apply(vec)
                coords = {position[c]: v for c, v in image.items() if c in position}
                # 用坐标重建像，确认确实落在子空间里
                rebuilt: Dict[int, int] = {}
                for i, v in coords.items():
                    for c, x in basis[i].items():
                        rebuilt[c] = (rebuilt.get(c, 0) + v * x) % p
                if {c: v for c, v in rebuilt.items() if v} != image:
                    raise OracleConsistencyError(f"{self.label}: 子空间在 {kind}^({m}) 下不稳定")
                columns.append(coords)
            return FpMatrix.from_columns(p, len(basis), columns)

        ops: Dict[str, Dict[int, FpMatrix]] = {RAISE: {}, LOWER: {}}
        for kind, source in ((RAISE, self.raise_ops), (LOWER, self.lower_ops)):
            for m, mat in source.items():
                ops[kind][m] = restrict_op(mat, kind, m)
        return ExplicitModule(
            p=p,
            weights=weights,
            max_order=self.max_order,
            raise_ops=ops[RAISE],
            lower_ops=ops[LOWER],
            label=self.label,
        )

    def generalized_eigenspace(self, value: int) -> "ExplicitModule":
        """Casimir 在 value 处的广义特征子空间"""
        shifted = self.casimir() - FpMatrix.identity(self.p, self.dim).scale(value)
        nilpotent = shifted.power(self.dim)
        return self.restrict(nilpotent.kernel_basis(), nilpotent.kernel_free_columns())


@lru_cache(maxsize=128)
def realize_tilting(j: int, p: int, max_order: int = 1) -> ExplicitModule:
    """
    T(j) 的显式实现

    :param max_order: 需要的最高除幂阶（G_r-不变量需要 p^{r−1}）
    :raises OracleConsistencyError: 构造出的特征标不是 char T(j)
    """
    if j < 0:
        raise ValueError(f"需要 j ≥ 0，当前 j={j}")
    if j <= p - 1:
        module = ExplicitModule.symmetric_power(j, p, max_order)
    elif j <= 2 * p - 2:
        big = ExplicitModule.symmetric_power(p - 1, p, max_order).tensor(
            ExplicitModule.symmetric_power(j - p + 1, p, max_order)
        )
        module = big.generalized_eigenspace(j * (j + 2) * inv_modp(2, p) % p)
    else:
        j1, j2 = tilting_normal_form(j, p)
        module = realize_tilting(j1, p, max_order).tensor(realize_tilting(j2, p, max_order // p).frobenius_twist())
    module.label = f"T({j})"
    if module.character() != char_tilting(j, p):
        raise OracleConsistencyError(
            f"T({j}) 的显式构造特征标 {module.character()!r} 与 char T({j}) = {char_tilting(j, p)!r} 不符"
        )
    module.check_weight_shift()
    logger.debug(f"构造 T({j})", p=p, dim=module.dim)
    return module


def module_for_level(j: int, p: int, r: int, module: Optional[ExplicitModule] = None) -> ExplicitModule:
    """G_r-不变量计算需要的模：默认 T(j)，带 p^{r−1} 阶除幂"""
    if module is not None:
        return module
    return realize_tilting(j, p, p ** (r - 1))
