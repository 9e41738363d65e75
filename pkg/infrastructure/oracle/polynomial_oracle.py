"""
暴力计算的"地面真值"：S = k[x₁,y₁,…,xₙ,yₙ] 及其张量积的 Frobenius 核不变量、
显式模、以及单变量复形的 B₁-上同调

所有输出都是截断到给定次数的精确结果，从不外推。
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

from config.constants import Constants
from infrastructure.characters.sl2_characters import WeightCharacter
from infrastructure.linear.fp_matrix import check_prime
from infrastructure.oracle.b1_cohomology import (
    BComplex,
    b1_cohomology_oracle,
    b1_cohomology_range,
    build_cj_complex,
    tate_cohomology_oracle,
)
from infrastructure.oracle.explicit_module import ExplicitModule, realize_tilting
from infrastructure.oracle.monomials import divided_power_matrix, monomial_basis
from infrastructure.oracle.resolution_builder import EquivariantResolution, build_equivariant_resolution
from infrastructure.oracle.term_space import GradedInvariants, TermSpace
from interface.oracle import IInvariantOracle
from utils.simple_logger import get_logger

logger = get_logger(Constants.LOG_PREFIX_ORACLE)

__all__ = [
    "GradedTarget",
    "InvariantTarget",
    "PolynomialOracle",
    "b1_cohomology_oracle",
    "build_cj_complex",
    "build_equivariant_resolution",
    "divided_power_matrix",
    "gr_generators_S",
    "gr_invariants_S",
    "graded_invariants_of_tensor",
    "monomial_basis",
    "realize_tilting",
    "tate_cohomology_oracle",
]

TARGET_S = "S"
TARGET_TJS = "TjS"
TARGET_KJK = "Kjk"


@dataclass(frozen=True)
class InvariantTarget:
    """要计算不变量的对象：S、T(j)⊗S 或 K_{jk}"""
    kind: str
    n: int
    p: int
    r: int = 1
    j: int = 0
    k: int = 0

    def describe(self) -> str:
        if self.kind == TARGET_S:
            return f"S^(G_{self.r})"
        if self.kind == TARGET_TJS:
            return f"(T({self.j})⊗S)^(G_{self.r})"
        return f"K_{{{self.j}{self.k}}}^(G_{self.r})"


@dataclass
class GradedTarget:
    """按次数的不变量特征标与极小生成元特征标（权已除以 p^r）"""
    target: InvariantTarget
    max_degree: int
    invariants: Dict[int, WeightCharacter] = field(default_factory=dict)
    generators: Dict[int, WeightCharacter] = field(default_factory=dict)

    def total_dimension(self) -> int:
        return sum(c.dim for c in self.invariants.values())


@lru_cache(maxsize=32)
def _s_invariants(n: int, p: int, r: int, threads: int = 1) -> GradedInvariants:
    check_prime(p)
    return GradedInvariants(TermSpace(n, p, label="S"), r, threads=threads)


def gr_invariants_S(n: int, p: int, r: int, d: int, threads: int = 1) -> WeightCharacter:
    """(S^{G_r})_d 作为 G^{(r)}-权特征标"""
    return _s_invariants(n, p, r, threads).invariant_character(d)


def gr_generators_S(n: int, p: int, r: int, d: int, threads: int = 1) -> WeightCharacter:
    """S^{G_r} 作为 S^{p^r}-模在第 d 次的极小生成元特征标"""
    return _s_invariants(n, p, r, threads).generator_character(d)


def _tensor_invariants(module: ExplicitModule, n: int, p: int, r: int, threads: int = 1) -> GradedInvariants:
    return GradedInvariants(TermSpace(n, p, module=module, label=f"{module.label}⊗S"), r, threads=threads)


def graded_invariants_of_tensor(module: ExplicitModule, n: int, p: int, r: int, d: int) -> WeightCharacter:
    """((M ⊗ S)^{G_r})_d；M 需要带 p^{r−1} 阶除幂"""
    return _tensor_invariants(module, n, p, r).invariant_character(d)


@lru_cache(maxsize=8)
def _resolution(n: int, j: int, p: int, max_degree: int) -> EquivariantResolution:
    return build_equivariant_resolution(n, j, max_degree, p)


class PolynomialOracle(IInvariantOracle):
    """按 InvariantTarget 分派的不变量计算器，带线程数与结果缓存"""

    def __init__(self, threads: int = 1):
        self.threads = max(1, threads)
        self._cache: Dict[Tuple[InvariantTarget, int], GradedTarget] = {}

    def _engine(self, target: InvariantTarget, max_degree: int) -> GradedInvariants:
        if target.kind == TARGET_S:
            return _s_invariants(target.n, target.p, target.r, self.threads)
        if target.kind == TARGET_TJS:
            module = realize_tilting(target.j, target.p, target.p ** (target.r - 1))
            return _tensor_invariants(module, target.n, target.p, target.r, self.threads)
        if target.kind == TARGET_KJK:
            resolution = _resolution(target.n, target.j, target.p, max_degree)
            space = resolution.spaces[target.k]
            return GradedInvariants(
                space,
                target.r,
                constraints=[resolution.kernel_constraint(target.k)],
                threads=self.threads,
            )
        raise ValueError(f"未知的不变量目标: {target.kind}")

    def graded_invariants(self, target: InvariantTarget, max_degree: int) -> GradedTarget:
        key = (target, max_degree)
        if key in self._cache:
            return self._cache[key]
        engine = self._engine(target, max_degree)
        result = GradedTarget(target=target, max_degree=max_degree)
        with logger.timed(f"{target.describe()} 到第 {max_degree} 次"):
            for d in range(max_degree + 1):
                result.invariants[d] = engine.invariant_character(d)
                result.generators[d] = engine.generator_character(d)
                logger.progress(d + 1, max_degree + 1, target.describe())
        self._cache[key] = result
        return result

    def b1_cohomology(
        self,
        n: int,
        p: int,
        j: int,
        k: int,
        t: Sequence[int],
        degrees: Sequence[int],
        tate: bool = False,
    ) -> Dict[int, WeightCharacter]:
        """H^l(B₁, C_{jk}^{(t)})（权已除以 p），k=None 时为完整的 C_j^{(t)}"""
        complex_: BComplex = build_cj_complex(n, p, j, t, k)
        return b1_cohomology_range(complex_, degrees, tate=tate)

    def kjk_kernel_character(self, n: int, j: int, k: int, d: int, p: Optional[int] = None, max_degree: Optional[int] = None):
        """由显式分解算出的 K_{jk} 在第 d 次的特征标"""
        resolution = build_equivariant_resolution(n, j, max_degree if max_degree is not None else d, p)
        return resolution.kernel_character(k, d)
