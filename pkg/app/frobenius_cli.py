"""Frobenius Labs 命令行入口"""
import argparse
import os
import sys
import time
from typing import Any, Dict, List, Optional

# 添加项目根路径到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.constants import Constants
from config.settings import Settings
from app.factory import FrobeniusLabsFactory
from app.service_registry import SERVICE_REPORT_STORAGE, SERVICE_VERIFIER, ServiceRegistry
from algorithm.summand_catalog import (
    decompose_Kjk_G1,
    decompose_TjS_G1,
    iterate_limit,
)
from algorithm.verifier import SCENARIOS, normalize_scenario
from infrastructure.characters.sl2_characters import (
    fusion_product,
    g1_invariants_tilting,
    tensor_tiltings,
    tilting_pieri,
)
from utils.errors import FrobeniusLabsError, OracleConsistencyError, ReportWriteError
from utils.simple_logger import get_logger, set_global_level

logger = get_logger("CLI")

# 这些参数在命令行未给出时为None，交给 Settings.resolve 合并
_SETTING_ARGS = (
    "n", "p", "r", "j", "k", "max_degree", "threads", "output_format", "output_path",
    "allow_small_p", "log_level",
)


def build_parser() -> argparse.ArgumentParser:
    """构建参数解析器"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--n', type=int, default=None, help=f'V 的副本数（默认 {Constants.DEFAULT_N}）')
    common.add_argument('--p', type=int, default=None, help=f'特征（默认 {Constants.DEFAULT_P}）')
    common.add_argument('--r', type=int, default=None, help='Frobenius 层级')
    common.add_argument('--j', type=int, default=None, help='tilting 指标 j')
    common.add_argument('--k', type=int, default=None, help='K_{jk} 的 k')
    common.add_argument('--max-degree', '-D', dest='max_degree', type=int, default=None,
                        help=f'截断次数（默认 {Constants.DEFAULT_MAX_DEGREE}）')
    common.add_argument('--threads', type=int, default=None, help='线程数（也可用 FFRT_THREADS）')
    common.add_argument('--format', dest='output_format', choices=Constants.OUTPUT_FORMATS, default=None,
                        help='输出格式')
    common.add_argument('--output', '-o', dest='output_path', default=None, help='报告输出路径（默认 stdout）')
    common.add_argument('--config', '-c', default=None, help='key = value 格式的配置文件')
    common.add_argument('--allow-small-p', dest='allow_small_p', action='store_const', const=True, default=None,
                        help='允许 p < max{n−2,3}（报告会标注超出假设）')
    common.add_argument('--log-level', dest='log_level', default=None, help='日志级别')

    parser = argparse.ArgumentParser(
        prog='frobenius',
        description='Gr(2,n) 坐标环 Frobenius 直和项的目录与验证',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  %(prog)s catalog s-invariants --n 4 --p 3 --r 2
  %(prog)s decompose tjs --n 4 --p 3 --j 5
  %(prog)s tilting pieri --a 5 --p 5
  %(prog)s verify s-invariants --n 4 --p 3 --max-degree 13 --save
  %(prog)s verify b1-predictor --n 4 --p 3 --max-degree 8 --format json
  %(prog)s limit --n 5 --p 3 --j 7
  %(prog)s suite
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    catalog = sub.add_parser('catalog', parents=[common], help='列出直和项目录')
    catalog.add_argument('which', choices=['s-invariants', 'r-module', 'pushforward'])

    decompose = sub.add_parser('decompose', parents=[common], help='G₁ 层级的分解目录')
    decompose.add_argument('which', choices=['tjs', 'kjk'])

    tilting = sub.add_parser('tilting', parents=[common], help='SL₂ tilting 模计算')
    tilting.add_argument('which', choices=['product', 'pieri', 'fusion', 'g1inv'])
    tilting.add_argument('--l', dest='ls', type=int, nargs='+', default=None, help='tilting 指标')
    tilting.add_argument('--a', type=int, default=None, help='pieri 的 a')

    verify = sub.add_parser('verify', parents=[common], help='与暴力计算对账')
    verify.add_argument('scenario', help=f"场景: {', '.join(SCENARIOS)}")
    verify.add_argument('--l-max', dest='l_max', type=int, default=Constants.DEFAULT_L_MAX,
                        help='b1-predictor 比较的最高上同调次数')
    verify.add_argument('--save', action='store_true', help='把场景收录到注册表')

    sub.add_parser('limit', parents=[common], help='迭代 Frobenius 极限区间')
    sub.add_parser('suite', parents=[common], help='运行注册表中的全部场景')
    return parser


def resolve_settings(args: argparse.Namespace) -> Settings:
    """命令行 > FFRT_THREADS > 配置文件 > 默认值"""
    config_path = args.config or os.getenv(Constants.ENV_CONFIG_FILE)
    file_values = Settings.load_config_file(config_path) if config_path else {}
    cli_values = {name: getattr(args, name, None) for name in _SETTING_ARGS}
    return Settings.resolve(file_values, cli_values)


def _with_notes(report: Dict[str, Any], settings: Settings) -> Dict[str, Any]:
    note = settings.hypothesis_note()
    if note:
        report.setdefault("notes", []).append(note)
    return report


def _catalog_report(args, settings: Settings) -> Dict[str, Any]:
    n, p, r = settings.n, settings.p, settings.r
    entries = FrobeniusLabsFactory.create_catalogs(settings)[args.which]
    return {
        "scenario": f"catalog {args.which}",
        "params": {"n": n, "p": p, "r": r},
        "consistent": True,
        "entries": [e.to_dict() for e in entries],
        "residual_degrees": [],
        "notes": [],
    }


def _decompose_report(args, settings: Settings) -> Dict[str, Any]:
    if args.which == 'tjs':
        report = decompose_TjS_G1(settings.n, settings.p, settings.j, settings.allow_small_p)
    else:
        report = decompose_Kjk_G1(settings.n, settings.p, settings.j, settings.k, settings.allow_small_p)
    return report.to_dict()


def _tilting_report(args, settings: Settings) -> Dict[str, Any]:
    p = settings.p
    if args.which == 'pieri':
        if args.a is None:
            raise ValueError("tilting pieri 需要 --a")
        params: Dict[str, Any] = {"a": args.a, "p": p}
        result = tilting_pieri(args.a, p)
    else:
        if not args.ls:
            raise ValueError(f"tilting {args.which} 需要 --l")
        params = {"l": list(args.ls), "p": p}
        if args.which == 'product':
            result = tensor_tiltings(args.ls, p)
        elif args.which == 'fusion':
            result = fusion_product(args.ls, p)
        else:
            if len(args.ls) != 1:
                raise ValueError("tilting g1inv 只接受一个 --l")
            result = g1_invariants_tilting(args.ls[0], p)
    symbol = "L" if args.which == 'fusion' else "T"
    return {
        "scenario": f"tilting {args.which}",
        "params": params,
        "consistent": True,
        "result": result.format(symbol),
        "decomposition": {str(l): m for l, m in result.items()},
    }


def _limit_report(settings: Settings) -> Dict[str, Any]:
    limit = iterate_limit(settings.n, settings.p, settings.j)
    return {
        "scenario": "limit",
        "params": {"n": settings.n, "p": settings.p, "j": settings.j},
        "consistent": True,
        "interval": [limit.lo, limit.hi],
        "iterations": limit.iterations,
        "trajectory": [list(step) for step in limit.trajectory],
    }


def _verify(args, settings: Settings, registry: ServiceRegistry) -> Dict[str, Any]:
    scenario = normalize_scenario(args.scenario)
    verifier = registry.get(SERVICE_VERIFIER)
    params = {"n": settings.n, "p": settings.p, "r": settings.r, "j": settings.j, "k": settings.k}
    if scenario == 'b1-predictor':
        params["l_max"] = args.l_max
    report = verifier.verify(scenario, params, settings.max_degree)
    if args.save:
        verifier.save_scenario({"scenario": scenario, "params": params, "max_degree": settings.max_degree})
    return report.to_dict()


def run(argv: Optional[List[str]] = None) -> int:
    """
    执行一次命令行调用

    :param argv: 参数列表，None 时读取 sys.argv
    :return: 退出码 0 成功/一致，2 不一致，1 用法或前提错误
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return Constants.EXIT_OK if e.code in (0, None) else Constants.EXIT_USAGE

    try:
        settings = resolve_settings(args)
        set_global_level(settings.log_level)
        if args.command == 'tilting':
            settings.validate(critical_only=True)
        else:
            settings.validate()

        registry = ServiceRegistry.create_default_registry(settings)
        start = time.perf_counter()
        if args.command == 'suite':
            verifier = registry.get(SERVICE_VERIFIER)
            return Constants.EXIT_OK if verifier.run_suite() else Constants.EXIT_INCONSISTENT
        if args.command == 'catalog':
            report = _catalog_report(args, settings)
        elif args.command == 'decompose':
            report = _decompose_report(args, settings)
        elif args.command == 'tilting':
            report = _tilting_report(args, settings)
        elif args.command == 'limit':
            report = _limit_report(settings)
        else:
            report = _verify(args, settings, registry)
        report.setdefault("runtime_ms", int((time.perf_counter() - start) * 1000))
        if args.command != 'verify':
            _with_notes(report, settings)

        storage = registry.get(SERVICE_REPORT_STORAGE)
        storage.save_report(report, settings.output_path, settings.output_format)
    except OracleConsistencyError as e:
        logger.error(f"暴力计算自检失败: {e}")
        return Constants.EXIT_INCONSISTENT
    except (FrobeniusLabsError, ValueError, ReportWriteError) as e:
        logger.error(str(e))
        return Constants.EXIT_USAGE

    return Constants.EXIT_OK if report.get("consistent", True) else Constants.EXIT_INCONSISTENT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
