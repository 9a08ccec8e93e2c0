"""Command-line entry point: monitor, robustness, bench, gen"""
import argparse
import sys
from typing import List, Optional

from loguru import logger

from stlstar import __version__
from stlstar.bench import format_robustness_table, format_table, run_benchmark, run_robustness_benchmark
from stlstar.config import get_settings
from stlstar.errors import STLStarError
from stlstar.models import MonitorMode, TraceKind
from stlstar.services.monitor_service import monitor_service
from stlstar.trace import generate, with_slope

EXIT_SATISFIED = 0
EXIT_VIOLATED = 1
EXIT_ERROR = 2


def configure_logging() -> None:
    settings = get_settings()
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level)
    if settings.log_file:
        logger.add(settings.log_file, rotation=settings.log_rotation, level="DEBUG")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    modes = [mode.value for mode in MonitorMode]
    parser = argparse.ArgumentParser(prog="stlstar", description="Offline STL* monitoring")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    monitor = commands.add_parser("monitor", help="Boolean verdict at the first sample")
    monitor.add_argument("--formula", required=True, help="formula file")
    monitor.add_argument("--trace", required=True, help="trace CSV (time,s1,...,sD)")
    monitor.add_argument("--mode", choices=modes, default=settings.default_mode)
    monitor.add_argument("--early-stop", action="store_true", default=settings.early_stop)
    monitor.add_argument("--json", action="store_true", help="also print the report as JSON")

    robustness = commands.add_parser("robustness", help="robustness estimate at the first sample")
    robustness.add_argument("--formula", required=True)
    robustness.add_argument("--trace", required=True)
    robustness.add_argument("--epsilon", type=float, default=settings.default_epsilon)
    robustness.add_argument("--mode", choices=modes, default=settings.default_mode)
    robustness.add_argument("--early-stop", action="store_true", default=settings.early_stop)
    robustness.add_argument("--fast-range", action="store_true", help="bound frozen terms by interval arithmetic")
    robustness.add_argument("--json", action="store_true")

    bench = commands.add_parser("bench", help="time the experiment formulas on generated traces")
    bench.add_argument("--sizes", type=int, nargs="+", default=settings.bench_sizes)
    bench.add_argument("--formulas", nargs="+", default=settings.bench_formulas)
    bench.add_argument("--modes", choices=modes, nargs="+", default=[MonitorMode.INTERVAL.value])
    bench.add_argument("--repetitions", type=int, default=settings.bench_repetitions)
    bench.add_argument("--seed", type=int, default=settings.generator_seed)
    bench.add_argument("--noise", type=float, default=0.0)
    bench.add_argument("--nonuniform", action="store_true")
    bench.add_argument("--early-stop", action="store_true", default=settings.early_stop)
    bench.add_argument("--robustness", action="store_true", help="time robustness estimates against the exact value")
    bench.add_argument("--epsilon", type=float, default=settings.default_epsilon)
    bench.add_argument("--json", action="store_true")

    gen = commands.add_parser("gen", help="write a synthetic trace")
    gen.add_argument("--kind", choices=[kind.value for kind in TraceKind], required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--noise", type=float, default=0.0)
    gen.add_argument("--nonuniform", action="store_true")
    gen.add_argument("--seed", type=int, default=settings.generator_seed)
    gen.add_argument("--violate", action="store_true", help="generate the violating variant")
    gen.add_argument("--slope", action="store_true", help="append slope columns")
    gen.add_argument("--out", required=True)
    return parser


def cmd_monitor(args) -> int:
    report = monitor_service.run_monitor(args.formula, args.trace, args.mode, args.early_stop)
    print("\n".join(report.to_lines()))
    if args.json:
        print(report.model_dump_json())
    return EXIT_SATISFIED if report.verdict else EXIT_VIOLATED


def cmd_robustness(args) -> int:
    report = monitor_service.run_robustness(
        args.formula, args.trace, args.epsilon, args.mode, args.early_stop, args.fast_range
    )
    print("\n".join(report.to_lines()))
    if args.json:
        print(report.model_dump_json())
    return EXIT_SATISFIED


def cmd_bench(args) -> int:
    common = dict(
        sizes=args.sizes,
        formulas=args.formulas,
        repetitions=args.repetitions,
        nonuniform=args.nonuniform,
        noise=args.noise,
        seed=args.seed,
        early_stop=args.early_stop,
    )
    if args.robustness:
        rows = run_robustness_benchmark(epsilon=args.epsilon, **common)
        print(format_robustness_table(rows))
    else:
        rows = run_benchmark(modes=[MonitorMode(mode) for mode in args.modes], **common)
        print(format_table(rows))
    if args.json:
        for row in rows:
            print(row.model_dump_json())
    return EXIT_SATISFIED


def cmd_gen(args) -> int:
    trace = generate(args.kind, args.n, noise=args.noise, nonuniform=args.nonuniform, seed=args.seed, violate=args.violate)
    if args.slope:
        trace = with_slope(trace)
    path = trace.to_csv(args.out)
    logger.info(f"Wrote {trace} to {path}")
    return EXIT_SATISFIED


COMMANDS = {
    "monitor": cmd_monitor,
    "robustness": cmd_robustness,
    "bench": cmd_bench,
    "gen": cmd_gen,
}


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (STLStarError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
