"""Runs monitors on files and packages the results as reports"""
import hashlib
import time
from pathlib import Path
from typing import Optional, Tuple, Union

from loguru import logger

from stlstar.config import get_settings
from stlstar.errors import STLStarError
from stlstar.formula import Formula
from stlstar.models import MonitorMode, MonitorStats, RunReport
from stlstar.parser import parse
from stlstar.services.boolean_monitor import baseline_monitor, boolean_monitor
from stlstar.services.oracle import oracle_sat
from stlstar.services.robustness_engine import robustness_engine
from stlstar.trace import Trace, load_csv

settings = get_settings()

PathLike = Union[str, Path]


def digest(path: PathLike) -> str:
    """SHA-256 of the file bytes"""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class MonitorService:
    """Front door for monitoring runs"""

    def monitor(
        self, formula: Formula, trace: Trace, mode: Union[MonitorMode, str, None] = None, early_stop: bool = False
    ) -> Tuple[bool, Optional[MonitorStats]]:
        """Boolean verdict at position 0 with the chosen engine"""
        mode = MonitorMode(mode or settings.default_mode)
        if mode is MonitorMode.INTERVAL:
            return boolean_monitor.monitor(formula, trace, early_stop=early_stop)
        if mode is MonitorMode.BASELINE:
            return baseline_monitor.monitor(formula, trace, early_stop=early_stop)
        return oracle_sat(formula, trace), None

    def _load(self, formula_path: PathLike, trace_path: PathLike) -> Tuple[Formula, Trace]:
        formula = parse(Path(formula_path).read_text(encoding="utf-8"))
        trace = load_csv(trace_path)
        return formula, trace

    def run_monitor(
        self,
        formula_path: PathLike,
        trace_path: PathLike,
        mode: Union[MonitorMode, str, None] = None,
        early_stop: Optional[bool] = None,
    ) -> RunReport:
        mode = MonitorMode(mode or settings.default_mode)
        early_stop = settings.early_stop if early_stop is None else early_stop
        try:
            formula, trace = self._load(formula_path, trace_path)
            logger.info(f"Monitoring {formula_path} over {trace_path} ({len(trace)} samples, mode={mode.value})")
            started = time.perf_counter()
            verdict, stats = self.monitor(formula, trace, mode, early_stop)
            elapsed = time.perf_counter() - started
        except (STLStarError, OSError) as e:
            logger.error(f"Monitoring failed: {e}")
            raise

        logger.info(f"Verdict: {'satisfied' if verdict else 'violated'} in {elapsed:.3f}s")
        return RunReport(
            command="monitor",
            mode=mode,
            formula=str(formula),
            formula_digest=digest(formula_path),
            trace_digest=digest(trace_path),
            trace_length=len(trace),
            early_stop=early_stop,
            verdict=verdict,
            stats=stats,
            wall_time=elapsed,
        )

    def run_robustness(
        self,
        formula_path: PathLike,
        trace_path: PathLike,
        epsilon: Optional[float] = None,
        mode: Union[MonitorMode, str, None] = None,
        early_stop: Optional[bool] = None,
        fast_range: bool = False,
    ) -> RunReport:
        mode = MonitorMode(mode or settings.default_mode)
        early_stop = settings.early_stop if early_stop is None else early_stop
        try:
            formula, trace = self._load(formula_path, trace_path)
            logger.info(f"Robustness of {formula_path} over {trace_path} ({len(trace)} samples, mode={mode.value})")
            started = time.perf_counter()
            estimate = robustness_engine.robustness(
                formula, trace, epsilon=epsilon, mode=mode, early_stop=early_stop, fast_range=fast_range
            )
            elapsed = time.perf_counter() - started
        except (STLStarError, OSError) as e:
            logger.error(f"Robustness computation failed: {e}")
            raise

        logger.info(
            f"Robustness {estimate.estimate} in [{estimate.lo}, {estimate.hi}] "
            f"after {estimate.n_calls} monitor calls ({elapsed:.3f}s)"
        )
        return RunReport(
            command="robustness",
            mode=mode,
            formula=str(formula),
            formula_digest=digest(formula_path),
            trace_digest=digest(trace_path),
            trace_length=len(trace),
            early_stop=early_stop,
            robustness=estimate,
            wall_time=elapsed,
        )


monitor_service = MonitorService()
