"""验证算法 - 把暴力计算的分次特征标与分解目录对账"""
import json
import os
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Set, Tuple

from algorithm.koszul_catalog import check_prime_bound, predict_cohomology, weight_interval
from algorithm.multiplicity_solver import STATUS_SOLVED, least_bottom_degree, solve_multiplicities
from algorithm.summand_catalog import (
    SummandInstance,
    catalog_S_Gr,
    decompose_Kjk_G1,
    decompose_TjS_G1,
)
from config.constants import Constants
from infrastructure.oracle.polynomial_oracle import TARGET_KJK, TARGET_S, TARGET_TJS, InvariantTarget
from infrastructure.oracle.resolution_builder import smallest_admissible_prime
from interface.oracle import IInvariantOracle
from interface.verifier import IVerifier
from utils.simple_logger import get_logger

logger = get_logger(Constants.LOG_PREFIX_SUITE)

SCENARIO_S = "s-invariants"
SCENARIO_TJS = "tjs"
SCENARIO_KJK = "kjk"
SCENARIO_B1 = "b1-predictor"

SCENARIOS = (SCENARIO_S, SCENARIO_TJS, SCENARIO_KJK, SCENARIO_B1)

_ALIASES = {
    "S_Gr": SCENARIO_S,
    "TjS_G1": SCENARIO_TJS,
    "Kjk_G1": SCENARIO_KJK,
    "B1_predictor": SCENARIO_B1,
}

VERDICT_CONFIRMED = "confirmed"
VERDICT_UNREACHED = "unreached"
VERDICT_UNDETERMINED = "undetermined"


def normalize_scenario(name: str) -> str:
    scenario = _ALIASES.get(name, name)
    if scenario not in SCENARIOS:
        raise ValueError(f"未知场景: {name}，可选 {', '.join(SCENARIOS)}")
    return scenario


@dataclass
class VerificationReport:
    """一次验证的结果；consistent 表示目标能被目录完整解释（只在截断范围内）"""
    scenario: str
    params: Dict
    max_degree: int
    consistent: bool = False
    status: str = ""
    entries: List[Dict] = field(default_factory=list)
    residual_degrees: List[int] = field(default_factory=list)
    first_failure: Optional[Dict] = None
    runtime_ms: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def confirmed_nonzero(self) -> List[str]:
        return [e["label"] for e in self.entries if e.get("verdict") == VERDICT_CONFIRMED]

    @property
    def unreached(self) -> List[str]:
        return [e["label"] for e in self.entries if e.get("verdict") == VERDICT_UNREACHED]

    def to_dict(self) -> Dict:
        return {
            "scenario": self.scenario,
            "params": dict(self.params),
            "max_degree": self.max_degree,
            "consistent": self.consistent,
            "status": self.status,
            "entries": list(self.entries),
            "residual_degrees": list(self.residual_degrees),
            "first_failure": self.first_failure,
            "runtime_ms": self.runtime_ms,
            "notes": list(self.notes),
        }


class FrobeniusVerifier(IVerifier):
    """
    验证算法 - 负责场景验证与场景注册表
    只依赖不变量计算器接口
    """

    def __init__(
        self,
        oracle: IInvariantOracle,
        registry_path: str,
        node_limit: int = Constants.DEFAULT_SOLVER_NODE_LIMIT,
        solution_limit: int = Constants.DEFAULT_SOLVER_SOLUTION_LIMIT,
        allow_small_p: bool = False,
    ):
        """
        初始化验证算法

        :param oracle: 不变量计算器
        :param registry_path: 场景注册表路径
        :param node_limit: 重数求解的节点预算
        :param solution_limit: 重数求解最多收集的解
        :param allow_small_p: 是否放宽 p ≥ max{n−2,3}
        """
        self.oracle = oracle
        self.registry_path = registry_path
        self.node_limit = node_limit
        self.solution_limit = solution_limit
        self.allow_small_p = allow_small_p

    # ========== 单个场景 ==========

    def verify(self, scenario: str, params: Dict, max_degree: int) -> VerificationReport:
        scenario = normalize_scenario(scenario)
        params = self._normalize_params(scenario, params)
        check_prime_bound(params["n"], params["p"], self.allow_small_p)
        start = time.perf_counter()
        report = VerificationReport(scenario=scenario, params=params, max_degree=max_degree)
        if scenario == SCENARIO_B1:
            self._verify_b1(report)
        else:
            self._verify_catalog(report)
        report.runtime_ms = int((time.perf_counter() - start) * 1000)
        if params["p"] < max(params["n"] - 2, Constants.MIN_P):
            report.notes.append(Constants.HYPOTHESIS_NOTE)
        logger.debug(f"{scenario} 验证完成", consistent=report.consistent, runtime_ms=report.runtime_ms)
        return report

    @staticmethod
    def _normalize_params(scenario: str, params: Dict) -> Dict:
        out = {
            "n": int(params.get("n", Constants.DEFAULT_N)),
            "p": params.get("p"),
            "r": int(params.get("r", Constants.DEFAULT_R)),
            "j": int(params.get("j", Constants.DEFAULT_J)),
            "k": int(params.get("k", Constants.DEFAULT_K)),
        }
        if out["p"] is None:
            out["p"] = smallest_admissible_prime(out["n"]) if scenario == SCENARIO_KJK else Constants.DEFAULT_P
        out["p"] = int(out["p"])
        if scenario == SCENARIO_B1:
            out["l_max"] = int(params.get("l_max", Constants.DEFAULT_L_MAX))
        if scenario in (SCENARIO_TJS, SCENARIO_KJK, SCENARIO_B1):
            out["r"] = 1
        return out

    def _catalog_and_target(self, report: VerificationReport) -> Tuple[List[SummandInstance], InvariantTarget]:
        n, p, r, j, k = (report.params[key] for key in ("n", "p", "r", "j", "k"))
        if report.scenario == SCENARIO_S:
            return catalog_S_Gr(n, r, p, self.allow_small_p), InvariantTarget(TARGET_S, n, p, r)
        if report.scenario == SCENARIO_TJS:
            decomposition = decompose_TjS_G1(n, p, j, self.allow_small_p)
            report.notes.extend(decomposition.notes)
            report.params["m"] = decomposition.params["m"]
            return decomposition.catalog, InvariantTarget(TARGET_TJS, n, p, 1, j=j)
        decomposition = decompose_Kjk_G1(n, p, j, k, self.allow_small_p)
        report.notes.extend(decomposition.notes)
        return decomposition.catalog, InvariantTarget(TARGET_KJK, n, p, 1, j=j, k=k)

    def _verify_catalog(self, report: VerificationReport) -> None:
        catalog, target = self._catalog_and_target(report)
        n, p, D = report.params["n"], report.params["p"], report.max_degree
        graded = self.oracle.graded_invariants(target, D)
        result = solve_multiplicities(
            graded.invariants,
            catalog,
            D,
            n,
            p,
            generators=graded.generators,
            node_limit=self.node_limit,
            solution_limit=self.solution_limit,
        )
        report.consistent = result.consistent
        report.status = result.status
        report.residual_degrees = result.residual_degrees
        if not result.consistent and result.first_failure is not None:
            degree, weight = result.first_failure
            report.first_failure = {"degree": degree, "weight": weight}

        confirmed = set(result.confirmed_keys())
        unique = result.solutions[0].entries_by_key() if result.status == STATUS_SOLVED else {}
        for entry in catalog:
            row = entry.to_dict()
            if entry.key in confirmed:
                row["verdict"] = VERDICT_CONFIRMED
                twists = unique.get(entry.key)
                if twists:
                    row["twist"] = sorted(twists)
                    row["multiplicity"] = [twists[t] for t in sorted(twists)]
            elif least_bottom_degree(entry, n, p, D) is None:
                row["verdict"] = VERDICT_UNREACHED
            else:
                row["verdict"] = VERDICT_UNDETERMINED
            report.entries.append(row)
        if result.node_exhausted:
            report.notes.append(f"求解器节点预算 {self.node_limit} 耗尽，确认项由排除搜索判定")
        elif result.solution_capped:
            report.notes.append(f"解的个数达到上限 {self.solution_limit}，确认项由排除搜索判定")

    def _verify_b1(self, report: VerificationReport) -> None:
        """对全部 t ∈ [0,p−1]^n 比较预测器与直接计算；区间公式与 t 上的并比较"""
        n, p, j, k = (report.params[key] for key in ("n", "p", "j", "k"))
        epsilon = 1 if k > j else 0
        degrees = [l for l in range(1, report.params["l_max"] + 1) if l <= n - 3 or l > k]
        union: Dict[int, Dict[int, int]] = {l: {} for l in degrees}
        mismatches = 0
        for t in product(range(p), repeat=n):
            observed = self.oracle.b1_cohomology(n, p, j, k, t, degrees)
            for l in degrees:
                weights: Set[int] = set(observed[l])
                prediction = predict_cohomology(n, p, j, k, t, l)
                r1, r2 = prediction.divided(p)
                expected_extra = {r2} - {r1} if r2 is not None else set()
                if weights - {r1} != expected_extra:
                    mismatches += 1
                    if report.first_failure is None:
                        report.first_failure = {
                            "t": list(t),
                            "l": l,
                            "oracle": observed[l].to_dict(),
                            "predicted": [r1, r2],
                        }
                for w in weights:
                    union[l][w] = union[l].get(w, 0) + 1

        interval_ok = True
        for l in degrees:
            if not 1 + epsilon <= l <= n - 3:
                continue
            interval = weight_interval(n, p, j, k, l)
            if set(union[l]) != set(interval.values()):
                interval_ok = False
                report.notes.append(
                    f"l={l}: 直接计算的权 {sorted(union[l])} ≠ 区间 [{interval.lo}, {interval.hi}]"
                )
        for l in degrees:
            for w, count in sorted(union[l].items()):
                report.entries.append({
                    "kind": "B1Weight",
                    "indices": [l, w],
                    "frobenius_level": 1,
                    "twist": Constants.TWIST_UNKNOWN,
                    "multiplicity": count,
                    "flag": Constants.FLAG_NONZERO,
                    "label": f"H^{l} ∋ ({w}pω)",
                    "verdict": VERDICT_CONFIRMED,
                })
        report.consistent = mismatches == 0 and interval_ok
        report.status = "matched" if report.consistent else "mismatched"
        report.notes.append(f"比较了 {p ** n} 个 t、次数 {degrees}，不符 {mismatches} 处")

    # ========== 场景注册表 ==========

    def load_scenarios(self) -> List[Dict]:
        """加载所有已登记的场景"""
        if not os.path.exists(self.registry_path):
            return []

        with open(self.registry_path, 'r', encoding='utf-8') as f:
            return json.load(f)

    def save_scenario(self, scenario_data: Dict):
        """将场景加入注册表"""
        scenarios = self.load_scenarios()

        new_entry = {
            "name": scenario_data.get("name", f"{scenario_data['scenario']}_{len(scenarios) + 1}"),
            "scenario": normalize_scenario(scenario_data["scenario"]),
            "params": scenario_data.get("params", {}),
            "max_degree": scenario_data.get("max_degree", Constants.DEFAULT_MAX_DEGREE),
        }
        if "expect" in scenario_data:
            new_entry["expect"] = scenario_data["expect"]

        # 避免重复
        if any(
            s["scenario"] == new_entry["scenario"]
            and s.get("params") == new_entry["params"]
            and s.get("max_degree") == new_entry["max_degree"]
            for s in scenarios
        ):
            logger.info("场景已存在，跳过添加")
            return

        scenarios.append(new_entry)

        os.makedirs(os.path.dirname(os.path.abspath(self.registry_path)), exist_ok=True)
        with open(self.registry_path, 'w', encoding='utf-8') as f:
            json.dump(scenarios, f, indent=4, ensure_ascii=False)

        logger.info(f"新场景已收录至注册表: {new_entry['name']}")

    def run_suite(self) -> bool:
        """运行注册表中的全部场景"""
        scenarios = self.load_scenarios()

        if not scenarios:
            logger.info("场景注册表为空，跳过验证。")
            return True

        logger.info(f"{'#'*20} 启动验证套件 (共 {len(scenarios)} 个场景) {'#'*20}")

        all_passed = True
        for idx, case in enumerate(scenarios):
            logger.info(f"[Scenario {idx+1}/{len(scenarios)}] {case.get('name', case['scenario'])}")
            try:
                report = self.verify(case["scenario"], case.get("params", {}), case.get("max_degree", Constants.DEFAULT_MAX_DEGREE))
                passed, reason = self._meets_expectation(report, case.get("expect", {}))
                if passed:
                    logger.success(f"  -> [PASS] {report.status}，确认: {', '.join(report.confirmed_nonzero) or '无'}")
                else:
                    logger.error(f"  -> [FAIL] {reason}")
                    all_passed = False
            except Exception as e:
                logger.error(f"  -> [ERROR] 验证过程发生异常: {e}")
                all_passed = False

        if all_passed:
            logger.success("所有场景与目录一致。")
        else:
            logger.warning("存在与目录不一致或出错的场景。")

        return all_passed

    @staticmethod
    def _meets_expectation(report: VerificationReport, expect: Dict) -> Tuple[bool, str]:
        wanted = expect.get("consistent", True)
        if report.consistent != wanted:
            return False, f"consistent={report.consistent}，期望 {wanted}"
        missing = [label for label in expect.get("confirmed", []) if label not in report.confirmed_nonzero]
        if missing:
            return False, f"未确认: {', '.join(missing)}"
        return True, ""


def verify_decomposition(
    oracle: IInvariantOracle,
    scenario: str,
    params: Dict,
    max_degree: int,
    allow_small_p: bool = False,
) -> VerificationReport:
    """不经注册表直接验证一个场景"""
    return FrobeniusVerifier(oracle, registry_path="", allow_small_p=allow_small_p).verify(
        scenario, params, max_degree
    )
