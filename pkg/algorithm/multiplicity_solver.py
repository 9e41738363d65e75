"""
重数求解：把截断的分次特征标写成目录项（带扭）的非负整数组合

逐次向上搜索。第 d 次的剩余必须恰好由最低次为 d 的新直和项的生成元解释；
已知生成元特征标时，剩余还必须等于第 d 次的生成元。枚举所有解（带预算），
不做猜测：多解时报告 ambiguous，无解时报告 inconsistent。
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from algorithm.koszul_catalog import bottom_degree, char_Kjk
from algorithm.summand_catalog import (
    KIND_COV,
    KIND_K,
    KIND_K_INVARIANT,
    KIND_TILT_FREE,
    SummandInstance,
)
from config.constants import Constants
from infrastructure.characters.sl2_characters import (
    WeightCharacter,
    char_symmetric_power_S,
    char_tilting,
    char_weyl,
    invariant_multiplicity,
)
from utils.errors import UnknownSummandKindError
from utils.simple_logger import get_logger

logger = get_logger(Constants.LOG_PREFIX_SOLVER)

GradedCharacter = Dict[int, WeightCharacter]

STATUS_SOLVED = "solved"
STATUS_AMBIGUOUS = "ambiguous"
STATUS_INCONSISTENT = "inconsistent"
STATUS_INCONCLUSIVE = "inconclusive"


# ========== 直和项的分次特征标 ==========

def _internal_character(s: SummandInstance, n: int, p: int, d: int) -> WeightCharacter:
    """未扭、未 Frobenius 伸缩时第 d 次的特征标"""
    if s.kind == KIND_TILT_FREE:
        return char_tilting(s.indices[0], p) * char_symmetric_power_S(n, d)
    if s.kind == KIND_K:
        return char_Kjk(n, s.indices[0], s.indices[1], d)
    if s.kind == KIND_COV:
        dim = invariant_multiplicity(char_weyl(s.indices[0]) * char_symmetric_power_S(n, d))
        return WeightCharacter({0: dim})
    if s.kind == KIND_K_INVARIANT:
        return WeightCharacter({0: invariant_multiplicity(char_Kjk(n, s.indices[0], s.indices[1], d))})
    raise UnknownSummandKindError(f"没有分次特征标的直和项类型: {s.kind}")


def summand_graded_character(s: SummandInstance, n: int, p: int, max_degree: int) -> GradedCharacter:
    """
    带扭 s 的直和项在 ≤ max_degree 各次的特征标（G^{(r)}-权，已除以 p^r）

    第 s + p^r·d 次是内部第 d 次的特征标。
    :raises ValueError: 扭未知
    :raises UnknownSummandKindError: 层标签等没有特征标的类型
    """
    if not isinstance(s.twist, int):
        raise ValueError(f"{s.label()} 的扭未知，无法计算分次特征标")
    step = p ** s.frobenius_level
    out: GradedCharacter = {}
    d = 0
    while s.twist + step * d <= max_degree:
        char = _internal_character(s, n, p, d)
        if char:
            out[s.twist + step * d] = char
        d += 1
    return out


def least_bottom_degree(s: SummandInstance, n: int, p: int, max_degree: int) -> Optional[int]:
    """扭为 0（或给定扭）时生成元所在的次数；超出 max_degree 时为 None"""
    twist = s.twist if isinstance(s.twist, int) else 0
    step = p ** s.frobenius_level
    if s.kind == KIND_TILT_FREE:
        degree = twist
    elif s.kind == KIND_K:
        degree = twist + step * bottom_degree(s.indices[0], s.indices[1])
    else:
        graded = summand_graded_character(s.with_twist(twist), n, p, max_degree)
        degree = min(graded) if graded else max_degree + 1
    return degree if degree <= max_degree else None


# ========== 求解 ==========

@dataclass
class _Candidate:
    summand: SummandInstance
    bottom_degree: int
    bottom: WeightCharacter
    graded: GradedCharacter


@dataclass
class MultiplicityAssignment:
    """一个解：带扭直和项 → 正重数；成功时 residual 为空"""
    multiplicities: Dict[SummandInstance, int] = field(default_factory=dict)
    residual: GradedCharacter = field(default_factory=dict)

    def entries_by_key(self) -> Dict[Tuple, Dict[int, int]]:
        """目录身份 → {扭: 重数}"""
        out: Dict[Tuple, Dict[int, int]] = {}
        for s, mult in self.multiplicities.items():
            out.setdefault(s.key, {})[s.twist] = mult
        return out


@dataclass
class SolverResult:
    status: str
    solutions: List[MultiplicityAssignment] = field(default_factory=list)
    first_failure: Optional[Tuple[int, Optional[int]]] = None
    residual_degrees: List[int] = field(default_factory=list)
    nodes: int = 0
    node_exhausted: bool = False
    solution_capped: bool = False
    confirmed: List[Tuple] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return bool(self.solutions)

    @property
    def budget_exhausted(self) -> bool:
        return self.node_exhausted or self.solution_capped

    @property
    def complete(self) -> bool:
        """是否枚举了全部解"""
        return not self.budget_exhausted

    def confirmed_keys(self) -> List[Tuple]:
        """在每个解中都出现的目录身份"""
        return list(self.confirmed)


class _BudgetExhausted(Exception):
    pass


class _SolutionCap(Exception):
    pass


@dataclass
class _Search:
    solutions: List[MultiplicityAssignment] = field(default_factory=list)
    nodes: int = 0
    node_exhausted: bool = False
    solution_capped: bool = False
    first_failure: Optional[Tuple[int, Optional[int]]] = None
    residual_degrees: List[int] = field(default_factory=list)


class MultiplicitySolver:
    """逐次深度优先搜索，带节点与解个数预算"""

    def __init__(
        self,
        n: int,
        p: int,
        node_limit: int = Constants.DEFAULT_SOLVER_NODE_LIMIT,
        solution_limit: int = Constants.DEFAULT_SOLVER_SOLUTION_LIMIT,
    ):
        self.n = n
        self.p = p
        self.node_limit = node_limit
        self.solution_limit = solution_limit

    def expand(self, templates: Sequence[SummandInstance], max_degree: int) -> List[_Candidate]:
        """把目录项展开为所有最低次 ≤ D 的带扭候选"""
        candidates: List[_Candidate] = []
        for template in templates:
            twists = [template.twist] if isinstance(template.twist, int) else range(max_degree + 1)
            for twist in twists:
                summand = template.with_twist(twist, multiplicity=Constants.MULTIPLICITY_UNKNOWN_POSITIVE)
                bottom = least_bottom_degree(summand, self.n, self.p, max_degree)
                if bottom is None:
                    continue
                graded = summand_graded_character(summand, self.n, self.p, max_degree)
                if not graded.get(bottom):
                    continue
                candidates.append(_Candidate(summand, bottom, graded[bottom], graded))
        return candidates

    def solve(
        self,
        target: Mapping[int, WeightCharacter],
        templates: Sequence[SummandInstance],
        max_degree: int,
        generators: Optional[Mapping[int, WeightCharacter]] = None,
    ) -> SolverResult:
        candidates = self.expand(templates, max_degree)
        search = self._search(target, candidates, max_degree, generators, self.solution_limit)

        result = SolverResult(
            status=STATUS_INCONSISTENT,
            solutions=search.solutions,
            first_failure=search.first_failure,
            residual_degrees=search.residual_degrees if not search.solutions else [],
            nodes=search.nodes,
            node_exhausted=search.node_exhausted,
            solution_capped=search.solution_capped,
        )
        if result.budget_exhausted and not result.solutions:
            result.status = STATUS_INCONCLUSIVE
        elif len(result.solutions) == 1 and result.complete:
            result.status = STATUS_SOLVED
        elif result.solutions:
            result.status = STATUS_AMBIGUOUS
        result.confirmed = self._confirm(result, target, candidates, max_degree, generators)
        logger.debug(
            "重数求解完成",
            status=result.status,
            candidates=len(candidates),
            solutions=len(result.solutions),
            confirmed=len(result.confirmed),
            nodes=result.nodes,
        )
        return result

    def _confirm(
        self,
        result: SolverResult,
        target: Mapping[int, WeightCharacter],
        candidates: List[_Candidate],
        max_degree: int,
        generators: Optional[Mapping[int, WeightCharacter]],
    ) -> List[Tuple]:
        """
        已找到的解的公共目录身份中，确认在每个解中都出现的那些

        枚举完整时公共部分即答案；否则对每个公共身份去掉其全部候选再搜一次，
        完整搜索且无解才算确认。
        """
        if not result.solutions:
            return []
        common = set(result.solutions[0].entries_by_key())
        for sol in result.solutions[1:]:
            common &= set(sol.entries_by_key())
        if result.complete:
            return sorted(common)
        confirmed = []
        for key in sorted(common):
            rest = [c for c in candidates if c.summand.key != key]
            without = self._search(target, rest, max_degree, generators, 1)
            if not without.solutions and not without.node_exhausted:
                confirmed.append(key)
        return confirmed

    def _search(
        self,
        target: Mapping[int, WeightCharacter],
        candidates: List[_Candidate],
        max_degree: int,
        generators: Optional[Mapping[int, WeightCharacter]],
        solution_limit: int,
    ) -> _Search:
        by_degree: Dict[int, List[_Candidate]] = {}
        for c in candidates:
            by_degree.setdefault(c.bottom_degree, []).append(c)
        residual = [WeightCharacter(target.get(d, WeightCharacter())) for d in range(max_degree + 1)]

        state = _Search()
        deepest: List = [-1, None, []]

        def fail(degree: int, weight: Optional[int], remaining: List[WeightCharacter]) -> None:
            if degree > deepest[0]:
                deepest[0] = degree
                deepest[1] = (degree, weight)
                deepest[2] = [d for d in range(degree, max_degree + 1) if remaining[d]]

        def tick() -> None:
            state.nodes += 1
            if state.nodes > self.node_limit:
                raise _BudgetExhausted()

        def search(degree: int, remaining: List[WeightCharacter], chosen: Dict[SummandInstance, int]) -> None:
            tick()
            if degree > max_degree:
                state.solutions.append(MultiplicityAssignment(multiplicities=dict(chosen)))
                if len(state.solutions) >= solution_limit:
                    raise _SolutionCap()
                return
            here = remaining[degree]
            negative = [w for w, m in here.items() if m < 0]
            if negative:
                fail(degree, negative[0], remaining)
                return
            if generators is not None and here != WeightCharacter(generators.get(degree, WeightCharacter())):
                wrong = here - WeightCharacter(generators.get(degree, WeightCharacter()))
                fail(degree, next(iter(wrong), None), remaining)
                return
            options = by_degree.get(degree, [])
            found = False
            for combo in self._combinations(here, options, tick):
                found = True
                updated = list(remaining)
                for cand, mult in combo:
                    for d, char in cand.graded.items():
                        updated[d] = updated[d] - char.scale(mult)
                    chosen[cand.summand] = mult
                search(degree + 1, updated, chosen)
                for cand, _ in combo:
                    del chosen[cand.summand]
            if not found:
                fail(degree, next(iter(here), None), remaining)

        try:
            search(0, residual, {})
        except _BudgetExhausted:
            state.node_exhausted = True
        except _SolutionCap:
            state.solution_capped = True
        state.first_failure = deepest[1]
        state.residual_degrees = deepest[2]
        return state

    @staticmethod
    def _combinations(residual: WeightCharacter, options: List[_Candidate], tick):
        """Σ x_c·bottom_c = residual 的全部非负整数解 [(候选, x_c)]（只含 x_c > 0）"""

        def rec(i: int, left: WeightCharacter, acc: List[Tuple[_Candidate, int]]):
            tick()
            if not left:
                yield list(acc)
                return
            if i == len(options):
                return
            cand = options[i]
            bound = min(left[w] // m for w, m in cand.bottom.items())
            for x in range(bound, -1, -1):
                rest = left - cand.bottom.scale(x) if x else left
                if x:
                    acc.append((cand, x))
                yield from rec(i + 1, rest, acc)
                if x:
                    acc.pop()

        if any(m < 0 for m in residual.values()):
            return
        yield from rec(0, residual, [])


def solve_multiplicities(
    target: Mapping[int, WeightCharacter],
    candidates: Sequence[SummandInstance],
    max_degree: int,
    n: int,
    p: int,
    generators: Optional[Mapping[int, WeightCharacter]] = None,
    node_limit: int = Constants.DEFAULT_SOLVER_NODE_LIMIT,
    solution_limit: int = Constants.DEFAULT_SOLVER_SOLUTION_LIMIT,
) -> SolverResult:
    """把 target（次数 → 特征标）写成 candidates 的带扭非负组合，截断到 max_degree"""
    return MultiplicitySolver(n, p, node_limit, solution_limit).solve(target, candidates, max_degree, generators)
