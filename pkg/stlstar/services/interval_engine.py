"""Interval algebra over maximal true-runs of sample indices.

An interval list is a sorted list of (start, end) index pairs, each the
maximal run of samples at which a subformula holds under one environment:
s1 <= e1 < s2 - 1 < ... Index pairs render to timestamps with `render`.

Every temporal combinator takes `k`, the smallest index of interest, and
clips its output to indices >= k. With `pointwise=True` (the default) the
result is exact for pointwise semantics; `pointwise=False` applies the
continuous-time recipe as is, which differs on sparse non-uniform samples.
"""
import math
from bisect import bisect_left, bisect_right
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from stlstar.formula import Interval
from stlstar.trace import Trace

IndexInterval = Tuple[int, int]
IntervalList = List[IndexInterval]
RealInterval = Tuple[float, float]


def transform(points, start: int = 0) -> IntervalList:
    """Maximal runs of True in points[start:]"""
    cells = np.asarray(points, dtype=bool)[start:]
    if cells.size == 0:
        return []
    padded = np.concatenate(([False], cells, [False])).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1) + start
    ends = np.flatnonzero(edges == -1) - 1 + start
    return list(zip(starts.tolist(), ends.tolist()))


def to_points(intervals: Sequence[IndexInterval], n: int) -> np.ndarray:
    points = np.zeros(n, dtype=bool)
    for s, e in intervals:
        points[s:e + 1] = True
    return points


def render(intervals: Sequence[IndexInterval], trace: Trace) -> List[RealInterval]:
    """Index pairs as timestamp pairs"""
    times = trace.times
    return [(float(times[s]), float(times[e])) for s, e in intervals]


def clip(intervals: Sequence[IndexInterval], k: int) -> IntervalList:
    if not intervals or intervals[0][0] >= k:
        return list(intervals)
    result = []
    for s, e in intervals:
        if e < k:
            continue
        result.append((max(s, k), e))
    return result


def contains(intervals: Sequence[IndexInterval], i: int) -> bool:
    pos = bisect_right(intervals, (i, math.inf)) - 1
    return pos >= 0 and intervals[pos][0] <= i <= intervals[pos][1]


def _merge(pieces: Iterable[IndexInterval]) -> IntervalList:
    """Sort and merge overlapping or adjacent index runs"""
    result: IntervalList = []
    for s, e in sorted(pieces):
        if result and s <= result[-1][1] + 1:
            if e > result[-1][1]:
                result[-1] = (result[-1][0], e)
        else:
            result.append((s, e))
    return result


# ---------------------------------------------------------------------------
# Back-shift and trim
# ---------------------------------------------------------------------------

def back_shift(iv: RealInterval, window: Interval) -> Optional[RealInterval]:
    """[m, n] shifted back by [a, b]: [m - b, n - a]"""
    m, n = iv
    lo, hi = m - window.hi, n - window.lo
    if lo > hi:
        return None
    return (lo, hi)


def _first_at_least(trace: Trace, x: float, k: int) -> int:
    """Smallest index i >= k with tau_i >= x"""
    times = trace.times
    n = len(times)
    if x <= times[k]:
        return k
    if trace.uniform:
        i = int(math.ceil((x - times[0]) / trace.step))
        i = min(max(i, k), n)
        while i > k and times[i - 1] >= x:
            i -= 1
        while i < n and times[i] < x:
            i += 1
        return i
    return _gallop(times, x, k, side="left")


def _last_at_most(trace: Trace, y: float, k: int) -> int:
    """Largest index j with tau_j <= y, or k - 1 when none is >= k"""
    times = trace.times
    n = len(times)
    if y >= times[-1]:
        return n - 1
    if trace.uniform:
        j = int(math.floor((y - times[0]) / trace.step))
        j = min(max(j, k - 1), n - 1)
        while j + 1 < n and times[j + 1] <= y:
            j += 1
        while j >= k and times[j] > y:
            j -= 1
        return j
    return _gallop(times, y, k, side="right") - 1


def _gallop(times: np.ndarray, x: float, lo: int, side: str) -> int:
    """Exponential search from `lo`, then binary search in the bracket"""
    n = len(times)
    step = 1
    hi = lo
    while hi < n and (times[hi] < x if side == "left" else times[hi] <= x):
        lo = hi
        hi = lo + step
        step *= 2
    hi = min(hi, n)
    search = bisect_left if side == "left" else bisect_right
    return search(times, x, lo, hi)


def trim(real_intervals: Iterable[RealInterval], trace: Trace, k: int = 0) -> IntervalList:
    """Largest sample run [tau_i, tau_j], k <= i <= j, inside each real interval"""
    n = len(trace)
    if k >= n:
        return []
    pieces = []
    for x, y in real_intervals:
        if y < trace.times[k] or x > trace.times[-1]:
            continue
        i = _first_at_least(trace, x, k)
        j = _last_at_most(trace, y, k)
        if i <= j:
            pieces.append((i, j))
    return _merge(pieces)


# ---------------------------------------------------------------------------
# Boolean combinators
# ---------------------------------------------------------------------------

def combine_not(intervals: Sequence[IndexInterval], trace_or_length, k: int = 0) -> IntervalList:
    """Complement over [k, n - 1]"""
    n = trace_or_length if isinstance(trace_or_length, int) else len(trace_or_length)
    result: IntervalList = []
    cursor = k
    for s, e in intervals:
        if e < k:
            continue
        s = max(s, k)
        if s > cursor:
            result.append((cursor, s - 1))
        cursor = e + 1
    if cursor <= n - 1:
        result.append((cursor, n - 1))
    return result


def combine_and(first: Sequence[IndexInterval], second: Sequence[IndexInterval]) -> IntervalList:
    result: IntervalList = []
    i = j = 0
    while i < len(first) and j < len(second):
        s = max(first[i][0], second[j][0])
        e = min(first[i][1], second[j][1])
        if s <= e:
            result.append((s, e))
        if first[i][1] < second[j][1]:
            i += 1
        else:
            j += 1
    return result


def combine_or(first: Sequence[IndexInterval], second: Sequence[IndexInterval]) -> IntervalList:
    result: IntervalList = []
    i = j = 0
    while i < len(first) or j < len(second):
        if j >= len(second) or (i < len(first) and first[i][0] <= second[j][0]):
            s, e = first[i]
            i += 1
        else:
            s, e = second[j]
            j += 1
        if result and s <= result[-1][1] + 1:
            if e > result[-1][1]:
                result[-1] = (result[-1][0], e)
        else:
            result.append((s, e))
    return result


# ---------------------------------------------------------------------------
# Temporal combinators
# ---------------------------------------------------------------------------

def _shift_runs(runs: Iterable[IndexInterval], window: Interval, trace: Trace, pointwise: bool) -> List[RealInterval]:
    """Back-shift index runs; in pointwise mode a run is first split where a gap exceeds b - a"""
    times = trace.times
    width = window.hi - window.lo
    split = pointwise and trace.max_gap > width
    gaps = trace.wide_gaps(width) if split else None
    shifted = []
    for s, e in runs:
        if split:
            first = bisect_left(gaps, s)
            last = bisect_left(gaps, e)
            for g in gaps[first:last]:
                shifted.append(back_shift((times[s], times[g]), window))
                s = int(g) + 1
        shifted.append(back_shift((times[s], times[e]), window))
    return [iv for iv in shifted if iv is not None]


def eventually(intervals: Sequence[IndexInterval], window: Interval, trace: Trace,
               k: int = 0, pointwise: bool = True) -> IntervalList:
    """Indices i >= k with some true sample j, tau_j - tau_i in the window"""
    if not intervals:
        return []
    return trim(_shift_runs(intervals, window, trace, pointwise), trace, k)


def always(intervals: Sequence[IndexInterval], window: Interval, trace: Trace,
           k: int = 0, pointwise: bool = True) -> IntervalList:
    """Computed as not eventually not; windows without samples are vacuously true"""
    n = len(trace)
    outside = combine_not(intervals, n, k)
    return combine_not(eventually(outside, window, trace, k, pointwise), n, k)


def until(first: Sequence[IndexInterval], second: Sequence[IndexInterval], window: Interval,
          trace: Trace, k: int = 0, pointwise: bool = True) -> IntervalList:
    """first U second, assembled from every (run of first, run of second) pair"""
    if not second:
        return []
    n = len(trace)
    times = trace.times
    pieces: List[IndexInterval] = []
    if pointwise and window.starts_at_zero:
        pieces.extend(clip(second, k))
    j = 0
    for s, e in first:
        if e < k:
            continue
        # pointwise: first may stop one sample before second takes over
        reach = min(e + 1, n - 1) if pointwise else e
        while j < len(second) and second[j][1] < s:
            j += 1
        overlap = []
        for q in range(j, len(second)):
            a, b = second[q]
            if a > reach:
                break
            overlap.append((max(a, s), min(b, reach)))
        if not overlap:
            continue
        shifted = _shift_runs(overlap, window, trace, pointwise)
        lower = times[max(s, k)]
        bounded = [(max(x, lower), min(y, times[e])) for x, y in shifted]
        pieces.extend(trim([iv for iv in bounded if iv[0] <= iv[1]], trace, k))
    return _merge(pieces)


def release(first: Sequence[IndexInterval], second: Sequence[IndexInterval], window: Interval,
            trace: Trace, k: int = 0, pointwise: bool = True) -> IntervalList:
    """first R second = not (not first U not second)"""
    n = len(trace)
    return combine_not(
        until(combine_not(first, n, k), combine_not(second, n, k), window, trace, k, pointwise),
        n,
        k,
    )
