"""
显式构造 M_j 的 G × GL(F)-等变分次分解

每个微分是 S-线性的，由生成元 T(w_u) ⊗ Λ^{a_u}F 的像决定。
未知数是 (源生成元, 目标基向量) 对，二者的权与多重次数 μ 相同；
方程是与 e、f 以及 E_ab (a ≠ b) 的交换关系。解空间必须恰为一维，
取第一个非零分量为 1。
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy import nextprime

from infrastructure.characters.resolution_terms import ResolutionTerm, resolution_terms
from infrastructure.characters.sl2_characters import WeightCharacter
from infrastructure.linear.fp_matrix import FpMatrix, check_prime, inv_modp
from infrastructure.oracle.explicit_module import ExplicitModule
from infrastructure.oracle.monomials import LOWER, RAISE, permutation_count
from infrastructure.oracle.term_space import Key, MultiDegree, TermSpace
from utils.errors import OracleConsistencyError
from utils.simple_logger import get_logger

logger = get_logger("resolution_builder")


def wedge_action(subset: Tuple[int, ...], a: int, b: int) -> Optional[Tuple[Tuple[int, ...], int]]:
    """E_ab 在 f_I 上：把 f_b 换成 f_a 并重新排序；a ∈ I 或 b ∉ I 时为零"""
    if b not in subset or a in subset:
        return None
    lo, hi = min(a, b), max(a, b)
    crossed = sum(1 for i in subset if lo < i < hi)
    new_subset = tuple(sorted([i for i in subset if i != b] + [a]))
    return new_subset, (-1) ** crossed


def gl_action_on_key(key: Key, a: int, b: int) -> Dict[Key, int]:
    """E_ab 在 M ⊗ ΛᵃF ⊗ S 的基向量上：Λ 部分换指标，S 部分为 x_a∂x_b + y_a∂y_b"""
    i_mod, subset, mono = key
    out: Dict[Key, int] = {}
    wedge = wedge_action(subset, a, b)
    if wedge is not None:
        new_subset, sign = wedge
        target = (i_mod, new_subset, mono)
        out[target] = out.get(target, 0) + sign
    for offset in (0, 1):
        exponent = mono[2 * b + offset]
        if not exponent:
            continue
        image = list(mono)
        image[2 * b + offset] -= 1
        image[2 * a + offset] += 1
        target = (i_mod, subset, tuple(image))
        out[target] = out.get(target, 0) + exponent
    return out


def _indicator(n: int, subset: Tuple[int, ...]) -> MultiDegree:
    return tuple(1 if i in subset else 0 for i in range(n))


@dataclass
class EquivariantDifferential:
    """P_u → P_{u−1}，images[生成元键] = 目标中的像（次数 δ 的部分）"""
    source: TermSpace
    target: TermSpace
    images: Dict[Key, Dict[Key, int]] = field(default_factory=dict)

    def block_matrix(self, mu: MultiDegree, weight: int) -> FpMatrix:
        """限制到块 (μ, 权) 上的矩阵"""
        source_basis = self.source.block_basis(mu, weight)
        target_basis = self.target.block_basis(mu, weight)
        target_index = self.target.block_index(mu, weight)
        entries: Dict[Tuple[int, int], int] = {}
        for col, (i_mod, subset, mono) in enumerate(source_basis):
            zero = (0,) * len(mono)
            for (i2, subset2, mono2), coeff in self.images.get((i_mod, subset, zero), {}).items():
                product = tuple(x + y for x, y in zip(mono, mono2))
                row = target_index[(i2, subset2, product)]
                entries[(row, col)] = entries.get((row, col), 0) + coeff
        return FpMatrix(self.source.p, len(target_basis), len(source_basis), entries)


@dataclass
class EquivariantResolution:
    """n 个项与 n−1 个微分；differentials[u]: P_u → P_{u−1}"""
    n: int
    j: int
    p: int
    terms: Tuple[ResolutionTerm, ...]
    spaces: List[TermSpace]
    differentials: Dict[int, EquivariantDifferential]
    checked_degree: int

    def kernel_character(self, u: int, d: int) -> WeightCharacter:
        """ker(P_u → P_{u−1}) 在第 d 次的特征标；u = k 时即 K_{jk}"""
        space = self.spaces[u]
        diff = self.differentials.get(u)
        out: Dict[int, int] = {}
        for mu in space.degree_blocks(d, sorted_only=True):
            count = permutation_count(mu)
            for w in space.block_weights(mu):
                dim = len(space.block_basis(mu, w))
                if not dim:
                    continue
                if diff is not None:
                    dim -= diff.block_matrix(mu, w).rank()
                if dim:
                    out[w] = out.get(w, 0) + dim * count
        return WeightCharacter(out)

    def kernel_constraint(self, k: int):
        """K_{jk} ⊂ P_k 的块约束，供不变量计算使用"""
        diff = self.differentials[k]
        return diff.block_matrix


def _solve_differential(source: TermSpace, target: TermSpace, n: int) -> EquivariantDifferential:
    p = source.p
    zero = (0,) * (2 * n)
    generators: List[Key] = [
        (i_mod, subset, zero)
        for i_mod in range(source.module.dim)
        for subset in source.subsets
    ]

    # 未知数：(生成元, 目标基向量)
    unknowns: Dict[Tuple[Key, Key], int] = {}
    targets_of: Dict[Key, List[Key]] = {}
    for gen in generators:
        mu = _indicator(n, gen[1])
        weight = source.module.weights[gen[0]]
        targets_of[gen] = target.block_basis(mu, weight)
        for tau in targets_of[gen]:
            unknowns[(gen, tau)] = len(unknowns)
    if not unknowns:
        raise OracleConsistencyError(f"{source.label} → {target.label}: 没有满足权与多重次数的候选项")

    def source_action(kind: str, gen: Key) -> Dict[Key, int]:
        if kind in (RAISE, LOWER):
            return source.apply_to_key(kind, 1, gen)
        return gl_action_on_key(gen, *kind)

    def target_action(kind, tau: Key) -> Dict[Key, int]:
        if kind in (RAISE, LOWER):
            return target.apply_to_key(kind, 1, tau)
        return gl_action_on_key(tau, *kind)

    operators = [RAISE, LOWER] + [(a, b) for a in range(n) for b in range(n) if a != b]
    rows: List[Dict[int, int]] = []
    for kind in operators:
        for gen in generators:
            # φ(X·s) − X·φ(s) = 0，按目标基向量逐个取系数
            equation: Dict[Key, Dict[int, int]] = {}
            for gen2, coeff in source_action(kind, gen).items():
                if coeff % p == 0:
                    continue
                for tau in targets_of.get(gen2, ()):
                    slot = equation.setdefault(tau, {})
                    idx = unknowns[(gen2, tau)]
                    slot[idx] = slot.get(idx, 0) + coeff
            for tau in targets_of[gen]:
                idx = unknowns[(gen, tau)]
                for rho, coeff in target_action(kind, tau).items():
                    if coeff % p == 0:
                        continue
                    slot = equation.setdefault(rho, {})
                    slot[idx] = slot.get(idx, 0) - coeff
            for slot in equation.values():
                cleaned = {i: v % p for i, v in slot.items() if v % p}
                if cleaned:
                    rows.append(cleaned)

    system = FpMatrix.from_row_dicts(p, len(rows), len(unknowns), rows)
    solutions = system.kernel_basis()
    if len(solutions) != 1:
        raise OracleConsistencyError(
            f"{source.label} → {target.label}: 等变方程组的解空间维数为 {len(solutions)}，期望 1"
        )
    solution = solutions[0]
    first = min(solution)
    scale = inv_modp(solution[first], p)

    images: Dict[Key, Dict[Key, int]] = {}
    for (gen, tau), idx in unknowns.items():
        v = solution.get(idx)
        if v:
            images.setdefault(gen, {})[tau] = v * scale % p
    logger.debug(f"求解微分 {source.label} → {target.label}", unknowns=len(unknowns), equations=len(rows))
    return EquivariantDifferential(source=source, target=target, images=images)


def build_equivariant_resolution(n: int, j: int, max_degree: int, p: Optional[int] = None) -> EquivariantResolution:
    """
    构造分解并在 ≤ max_degree 的每次上检查 d∘d = 0 与正合性（位置 0 除外）

    :param p: 素数，默认取满足 p ≥ max{n−2,3} 的最小素数
    :raises OracleConsistencyError: 解不唯一或正合性失败
    """
    if p is None:
        p = smallest_admissible_prime(n)
    check_prime(p)
    terms = resolution_terms(n, j)
    spaces = [
        TermSpace(
            n,
            p,
            module=ExplicitModule.symmetric_power(term.tilting_weight, p),
            wedge=term.wedge,
            shift=term.shift,
            label=term.label(),
        )
        for term in terms
    ]
    differentials = {u: _solve_differential(spaces[u], spaces[u - 1], n) for u in range(1, n)}
    resolution = EquivariantResolution(
        n=n, j=j, p=p, terms=terms, spaces=spaces, differentials=differentials, checked_degree=max_degree
    )
    _check_exactness(resolution, max_degree)
    logger.info(f"分解 M_{j} (n={n}) 已构造并检查到第 {max_degree} 次", p=p)
    return resolution


def _check_exactness(resolution: EquivariantResolution, max_degree: int) -> None:
    n = resolution.n
    for u in range(1, n):
        space = resolution.spaces[u]
        incoming = resolution.differentials.get(u + 1)
        outgoing = resolution.differentials[u]
        lower = resolution.differentials.get(u - 1)
        for d in range(max_degree + 1):
            for mu in space.degree_blocks(d, sorted_only=True):
                for w in space.block_weights(mu):
                    dim = len(space.block_basis(mu, w))
                    if not dim:
                        continue
                    out_block = outgoing.block_matrix(mu, w)
                    if lower is not None and not (lower.block_matrix(mu, w) @ out_block).is_zero():
                        raise OracleConsistencyError(f"M_{resolution.j}: 位置 −{u} 出发的 d∘d ≠ 0（μ={mu}, 权 {w}）")
                    in_rank = incoming.block_matrix(mu, w).rank() if incoming is not None else 0
                    if in_rank + out_block.rank() != dim:
                        raise OracleConsistencyError(
                            f"M_{resolution.j}: 位置 −{u} 在第 {d} 次、μ={mu}、权 {w} 处不正合"
                        )


def smallest_admissible_prime(n: int) -> int:
    """满足 p ≥ max{n−2,3} 的最小素数"""
    return int(nextprime(max(n - 2, 3) - 1))
