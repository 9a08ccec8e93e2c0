"""Finite timed traces: loading, writing and synthetic generation"""
import csv
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from stlstar.config import get_settings
from stlstar.errors import GeneratorError, TraceError
from stlstar.models import TraceKind

UNIFORM_TOLERANCE = 1e-9
MIN_GAP = 1e-6


class Trace:
    """Samples sigma_0..sigma_{n-1} taken at strictly increasing timestamps tau_0..tau_{n-1}"""

    def __init__(self, times: Sequence[float], values):
        times = np.array(times, dtype=float)
        values = np.array(values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if times.ndim != 1 or len(times) == 0:
            raise TraceError("trace needs at least one sample")
        if values.ndim != 2 or values.shape[0] != len(times) or values.shape[1] < 1:
            raise TraceError(f"expected {len(times)} samples of equal dimension, got shape {values.shape}")
        if not np.all(np.isfinite(times)):
            raise TraceError("timestamps must be finite")
        if len(times) > 1 and not np.all(np.diff(times) > 0):
            bad = int(np.argmin(np.diff(times) > 0)) + 1
            raise TraceError(f"timestamps must be strictly increasing (sample {bad})")
        self.times = times
        self.values = values
        self.times.setflags(write=False)
        self.values.setflags(write=False)
        self.gaps = np.diff(times)
        self.uniform = False
        self.step: Optional[float] = None
        if len(times) > 1:
            first = self.gaps[0]
            if np.all(np.abs(self.gaps - first) <= UNIFORM_TOLERANCE * abs(first)):
                self.uniform = True
                self.step = float(first)
        self._wide_gaps: Dict[float, np.ndarray] = {}
        self._windows: Dict[Tuple[float, float], Tuple[np.ndarray, np.ndarray]] = {}

    def __len__(self) -> int:
        return len(self.times)

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def max_gap(self) -> float:
        return float(self.gaps.max()) if len(self.gaps) else 0.0

    def signal(self, k: int) -> np.ndarray:
        """Values of dimension k (1-based)"""
        return self.values[:, k - 1]

    def wide_gaps(self, width: float) -> np.ndarray:
        """Sorted positions g with tau_{g+1} - tau_g > width"""
        cached = self._wide_gaps.get(width)
        if cached is None:
            cached = np.flatnonzero(self.gaps > width)
            self._wide_gaps[width] = cached
        return cached

    def window_bounds(self, lo: float, hi: float) -> Tuple[np.ndarray, np.ndarray]:
        """Per index i, the first and last j with tau_i + lo <= tau_j <= tau_i + hi (first > last when empty)"""
        key = (lo, hi)
        cached = self._windows.get(key)
        if cached is None:
            first = np.searchsorted(self.times, self.times + lo, side="left")
            last = np.searchsorted(self.times, self.times + hi, side="right") - 1
            cached = (first, last)
            self._windows[key] = cached
        return cached

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["time"] + [f"s{k}" for k in range(1, self.dimension + 1)])
            for t, row in zip(self.times, self.values):
                writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])
        return path

    def __repr__(self) -> str:
        kind = f"uniform step={self.step}" if self.uniform else "non-uniform"
        return f"Trace(n={len(self)}, dm={self.dimension}, {kind})"


def load_csv(path: Union[str, Path]) -> Trace:
    """Read `time,s1,...,sD` rows into a Trace"""
    path = Path(path)
    with path.open("r", newline="", encoding="utf-8") as handle:
        rows = [row for row in csv.reader(handle) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise TraceError(f"{path}: empty trace file")
    header = [cell.strip().lower() for cell in rows[0]]
    if len(header) < 2 or header[0] != "time":
        raise TraceError(f"{path}: header must be time,s1,...,sD")
    width = len(header)
    times: List[float] = []
    values: List[List[float]] = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise TraceError(f"{path}:{line_no}: expected {width} columns, got {len(row)}")
        try:
            numbers = [float(cell) for cell in row]
        except ValueError:
            raise TraceError(f"{path}:{line_no}: non-numeric cell") from None
        if not all(math.isfinite(x) for x in numbers):
            raise TraceError(f"{path}:{line_no}: non-finite value")
        if times and numbers[0] <= times[-1]:
            raise TraceError(f"{path}:{line_no}: timestamps must be strictly increasing")
        times.append(numbers[0])
        values.append(numbers[1:])
    if not times:
        raise TraceError(f"{path}: no samples")
    trace = Trace(times, values)
    logger.debug(f"Loaded {trace} from {path}")
    return trace


def with_slope(trace: Trace) -> Trace:
    """Append, for every dimension, min(|forward|, |backward|) difference quotient"""
    values = trace.values
    n = len(trace)
    slopes = np.zeros_like(values)
    if n > 1:
        quotients = np.abs(np.diff(values, axis=0) / trace.gaps[:, None])
        forward = np.vstack([quotients, quotients[-1:]])
        backward = np.vstack([quotients[:1], quotients])
        slopes = np.minimum(forward, backward)
    return Trace(trace.times, np.hstack([values, slopes]))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

PULSE_LEVELS = (1.0, -1.0)
STAIR_LEVELS = (0.0, 2.0, 4.0)
WOBBLE = 0.045
GLITCH = 1.0
GLITCH_TIME = 2.0


def _timestamps(n: int, horizon: float, nonuniform: bool, rng: np.random.Generator) -> np.ndarray:
    if not nonuniform:
        return np.linspace(0.0, horizon, n)
    inner = np.sort(rng.uniform(0.0, horizon, max(n - 2, 0)))
    times = np.concatenate([[0.0], inner, [horizon]])[:n]
    for i in range(1, n):
        times[i] = max(times[i], times[i - 1] + MIN_GAP)
    return times


def _segment(times: np.ndarray, horizon: float) -> np.ndarray:
    """Index of the level segment (horizon/10 long) each timestamp falls in"""
    return np.floor(times / (horizon / 10.0) + 1e-9).astype(int)


def _glitch(values: np.ndarray, times: np.ndarray) -> None:
    at = min(int(np.searchsorted(times, GLITCH_TIME)), len(times) - 1)
    values[at, 0] += GLITCH


def _pulse(times, horizon, violate):
    levels = np.where(_segment(times, horizon) % 2 == 0, *PULSE_LEVELS)
    values = levels.reshape(-1, 1).astype(float)
    if violate:
        _glitch(values, times)
    return values


def _drifting_pulse(times, horizon, violate):
    values = _pulse(times, horizon, violate)
    wobble = np.where(np.arange(len(times)) % 2 == 0, WOBBLE, -WOBBLE)
    values[:, 0] += wobble
    return values


def _stairs(times, horizon, violate):
    levels = np.asarray(STAIR_LEVELS)[_segment(times, horizon) % len(STAIR_LEVELS)]
    values = levels.reshape(-1, 1).astype(float)
    if violate:
        _glitch(values, times)
    return values


def _stabilize(times, horizon, violate):
    """s1 value, s2 first event flag, s3 second event flag"""
    scale = horizon / 50.0
    first_level, second_level = 10.0, 14.0
    settled = 20.0 if violate else (first_level + second_level) / 2.0
    s1 = np.where(times < 15 * scale, first_level, np.where(times < 22 * scale, second_level, settled))
    s2 = ((times >= 8 * scale) & (times < 12 * scale)).astype(float)
    s3 = ((times >= 18 * scale) & (times < 20 * scale)).astype(float)
    return np.column_stack([s1, s2, s3])


def _crossing(times, horizon, violate):
    """s1 rises to 15 at mid-horizon and falls back; s2 ramps up"""
    half = horizon / 2.0
    s1 = 15.0 * (1.0 - np.abs(times - half) / half)
    if violate:
        s1 = np.where(times > half, np.maximum(s1, 6.0), s1)
    s2 = times / 10.0
    return np.column_stack([s1, s2])


_SHAPES = {
    TraceKind.PULSE: _pulse,
    TraceKind.DRIFTING_PULSE: _drifting_pulse,
    TraceKind.STAIRS: _stairs,
    TraceKind.STABILIZE: _stabilize,
    TraceKind.CROSSING: _crossing,
}

# event flags are compared against 0.5 and stay noise-free
_NOISY_COLUMNS = {TraceKind.STABILIZE: [0]}


def generate(
    kind: Union[TraceKind, str],
    n: int,
    noise: float = 0.0,
    nonuniform: bool = False,
    seed: Optional[int] = None,
    violate: bool = False,
    horizon: Optional[float] = None,
) -> Trace:
    """Synthesize a trace over a fixed horizon; same arguments give identical traces"""
    try:
        kind = TraceKind(kind)
    except ValueError:
        raise GeneratorError(f"unknown trace kind: {kind}") from None
    if n < 2:
        raise GeneratorError(f"need at least 2 samples, got {n}")
    settings = get_settings()
    horizon = settings.generator_horizon if horizon is None else horizon
    seed = settings.generator_seed if seed is None else seed
    rng = np.random.default_rng(seed)

    times = _timestamps(n, horizon, nonuniform, rng)
    values = _SHAPES[kind](times, horizon, violate)
    if noise > 0:
        columns = _NOISY_COLUMNS.get(kind, list(range(values.shape[1])))
        values[:, columns] += rng.uniform(-noise, noise, size=(n, len(columns)))
    logger.debug(f"Generated {kind.value} trace: n={n}, noise={noise}, nonuniform={nonuniform}, violate={violate}")
    return Trace(times, values)
