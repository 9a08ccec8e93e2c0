"""Benchmark: experiment formulas over generated traces of growing size"""
import time
from typing import Iterable, List, Optional

from loguru import logger

from stlstar.config import get_settings
from stlstar.fixtures import FIXTURES, fixture_formula
from stlstar.models import BenchRow, MonitorMode, RobustnessBenchRow
from stlstar.services.monitor_service import monitor_service
from stlstar.services.robustness_engine import relative_error, robustness_baseline, robustness_engine
from stlstar.trace import generate, with_slope


def run_benchmark(
    sizes: Optional[Iterable[int]] = None,
    formulas: Optional[Iterable[str]] = None,
    modes: Iterable[MonitorMode] = (MonitorMode.INTERVAL,),
    repetitions: Optional[int] = None,
    nonuniform: bool = False,
    noise: float = 0.0,
    seed: Optional[int] = None,
    early_stop: bool = False,
) -> List[BenchRow]:
    """Time every formula x size x mode x (satisfying, violating) combination.

    Args:
        sizes: Trace lengths; all traces share the configured horizon
        formulas: Fixture names (phi1..phi4, psi)
        modes: Monitor engines to time
        repetitions: Runs per combination; the fastest is reported

    Returns:
        One row per combination
    """
    settings = get_settings()
    sizes = list(sizes or settings.bench_sizes)
    formulas = list(formulas or settings.bench_formulas)
    repetitions = repetitions or settings.bench_repetitions
    rows: List[BenchRow] = []

    for name in formulas:
        fixture = FIXTURES[name]
        formula = fixture_formula(name)
        for size in sizes:
            for violate in (False, True):
                trace = generate(fixture.kind, size, noise=noise, nonuniform=nonuniform, seed=seed, violate=violate)
                if fixture.slope:
                    trace = with_slope(trace)
                for mode in modes:
                    mode = MonitorMode(mode)
                    if mode is MonitorMode.ORACLE and size > settings.oracle_max_length:
                        logger.warning(f"Skipping oracle for {name} at size {size}")
                        continue
                    best = None
                    for _ in range(repetitions):
                        started = time.perf_counter()
                        verdict, stats = monitor_service.monitor(formula, trace, mode, early_stop)
                        elapsed = time.perf_counter() - started
                        best = elapsed if best is None else min(best, elapsed)
                    row = BenchRow(
                        formula=name,
                        size=size,
                        mode=mode,
                        trace="violating" if violate else "satisfying",
                        nonuniform=nonuniform,
                        seconds=best,
                        verdict=verdict,
                        max_intervals=stats.max_interval_count if stats else 0,
                        instantiations=stats.instantiations if stats else 0,
                    )
                    logger.info(
                        f"{name} n={size} {mode.value} {row.trace}: {best:.3f}s verdict={verdict} "
                        f"|intvl|={row.max_intervals}"
                    )
                    rows.append(row)
    return rows


def format_table(rows: List[BenchRow]) -> str:
    header = ["formula", "size", "mode", "trace", "seconds", "verdict", "|intvl|", "instantiations"]
    body = [
        [
            row.formula,
            str(row.size),
            row.mode.value,
            row.trace,
            f"{row.seconds:.4f}",
            "satisfied" if row.verdict else "violated",
            str(row.max_intervals),
            str(row.instantiations),
        ]
        for row in rows
    ]
    return _render(header, body)


def _render(header: List[str], body: List[List[str]]) -> str:
    widths = [max(len(line[c]) for line in [header] + body) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in [header] + body]
    return "\n".join(lines)


def run_robustness_benchmark(
    sizes: Optional[Iterable[int]] = None,
    formulas: Optional[Iterable[str]] = None,
    epsilon: Optional[float] = None,
    repetitions: Optional[int] = None,
    nonuniform: bool = False,
    noise: float = 0.0,
    seed: Optional[int] = None,
    early_stop: bool = False,
) -> List[RobustnessBenchRow]:
    """Time the binary-search estimate and compare it with the exact baseline value"""
    settings = get_settings()
    sizes = list(sizes or settings.bench_sizes)
    formulas = list(formulas or settings.bench_formulas)
    repetitions = repetitions or settings.bench_repetitions
    epsilon = settings.default_epsilon if epsilon is None else epsilon
    rows: List[RobustnessBenchRow] = []

    for name in formulas:
        fixture = FIXTURES[name]
        formula = fixture_formula(name)
        for size in sizes:
            for violate in (False, True):
                trace = generate(fixture.kind, size, noise=noise, nonuniform=nonuniform, seed=seed, violate=violate)
                if fixture.slope:
                    trace = with_slope(trace)
                best = None
                for _ in range(repetitions):
                    started = time.perf_counter()
                    result = robustness_engine.robustness(formula, trace, epsilon=epsilon, early_stop=early_stop)
                    elapsed = time.perf_counter() - started
                    best = elapsed if best is None else min(best, elapsed)
                exact = robustness_baseline(formula, trace)
                row = RobustnessBenchRow(
                    formula=name,
                    size=size,
                    trace="violating" if violate else "satisfying",
                    nonuniform=nonuniform,
                    epsilon=epsilon,
                    seconds=best,
                    estimate=result.estimate,
                    exact=exact,
                    n_calls=result.n_calls,
                    initial_range_width=result.initial_width,
                    relative_error=relative_error(result.estimate, exact),
                )
                logger.info(
                    f"{name} n={size} robustness {row.trace}: {best:.3f}s estimate={row.estimate:.4f} "
                    f"exact={exact:.4f} calls={row.n_calls}"
                )
                rows.append(row)
    return rows


def format_robustness_table(rows: List[RobustnessBenchRow]) -> str:
    header = ["formula", "size", "trace", "seconds", "n", "i.c.r.w.", "estimate", "exact", "r.e."]
    body = [
        [
            row.formula,
            str(row.size),
            row.trace,
            f"{row.seconds:.4f}",
            str(row.n_calls),
            f"{row.initial_range_width:g}",
            f"{row.estimate:.4f}",
            f"{row.exact:.4f}",
            "-" if row.relative_error is None else f"{row.relative_error:.2%}",
        ]
        for row in rows
    ]
    return _render(header, body)
