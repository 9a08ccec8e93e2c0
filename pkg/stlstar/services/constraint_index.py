"""Incremental interval lists for signal constraints f1(s) op f2(s*).

For a separable constraint f1 is evaluated once over the whole trace and
sorted. Under an environment the satisfying samples are then a prefix (for
< and <=) or a suffix (for > and >=) of the sorted order, split at the flip
position. When a freeze variable moves to the next sample only the threshold
f2(s*) changes, so only samples whose sorted position lies between the old
and the new flip position change truth value. Each such change is applied
to the run boundaries in constant time.
"""
import math
from typing import List, Mapping, Set, Tuple

import numpy as np

from stlstar.formula import Constraint, FreezeVar, values_over
from stlstar.models import Comparison
from stlstar.services.interval_engine import IntervalList, transform
from stlstar.trace import Trace

# searchsorted side giving the first sorted position past the true prefix / before the true suffix
_FLIP_SIDE = {
    Comparison.LE: "right",
    Comparison.LT: "left",
    Comparison.GE: "left",
    Comparison.GT: "right",
}


class SortedConstraintIndex:
    """Sorted f1 values, backlinks into the trace and the current run boundaries"""

    def __init__(self, constraint: Constraint, trace: Trace):
        self.constraint = constraint
        self.op = constraint.op
        self.n = len(trace)
        self.values = values_over(constraint.lhs, trace.values, {})
        self.order = np.argsort(self.values, kind="stable")
        self.sorted_values = self.values[self.order]
        self.position = np.empty(self.n, dtype=int)
        self.position[self.order] = np.arange(self.n)
        self.prefix_true = self.op in (Comparison.LT, Comparison.LE)

        self.points = np.zeros(self.n, dtype=bool)
        self.starts: Set[int] = set()
        self.finishes: Set[int] = set()
        self.flip = 0
        self.valid_from = 0
        self.subupdates = 0

    def flip_position(self, threshold: float) -> int:
        return int(np.searchsorted(self.sorted_values, threshold, side=_FLIP_SIDE[self.op]))

    def sorted_truth(self, flip: int) -> np.ndarray:
        """Truth value of each sorted position for a given flip position"""
        positions = np.arange(self.n)
        return positions < flip if self.prefix_true else positions >= flip

    def init_instantiation(self, env: Mapping[FreezeVar, object], i: int = 0) -> Tuple[np.ndarray, IntervalList, int]:
        """Evaluate every sample under `env`; samples before `i` are never asked for again"""
        self.flip = self.flip_position(float(self.constraint.threshold(env)))
        self.points = self.sorted_truth(self.flip)[self.position]
        self.valid_from = i
        runs = transform(self.points, 0)
        self.starts = {s for s, _ in runs}
        self.finishes = {e for _, e in runs}
        return self.points, self.intervals(i), self.flip

    def update_signal_constraint(self, i: int, env: Mapping[FreezeVar, object]) -> IntervalList:
        """Move to a new environment, valid from sample `i` on"""
        new_flip = self.flip_position(float(self.constraint.threshold(env)))
        lo, hi = sorted((self.flip, new_flip))
        for p in range(lo, hi):
            orig = int(self.order[p])
            if orig >= i:
                self.subupdate(orig)
        self.flip = new_flip
        self.valid_from = i
        return self.intervals(i)

    def subupdate(self, l: int) -> None:
        """Flip sample `l` and patch the run boundaries around it"""
        self.subupdates += 1
        left = l > 0 and bool(self.points[l - 1])
        right = l < self.n - 1 and bool(self.points[l + 1])
        becomes_true = not self.points[l]
        self.points[l] = becomes_true
        if becomes_true:
            if left:
                self.finishes.discard(l - 1)
            else:
                self.starts.add(l)
            if right:
                self.starts.discard(l + 1)
            else:
                self.finishes.add(l)
        else:
            if left:
                self.finishes.add(l - 1)
            else:
                self.starts.discard(l)
            if right:
                self.starts.add(l + 1)
            else:
                self.finishes.discard(l)

    def intervals(self, i: int) -> IntervalList:
        """Current runs restricted to samples >= i"""
        size = len(self.starts)
        remaining = self.n - i
        if size and size * math.log2(size + 1) >= remaining:
            return transform(self.points, i)
        result: List[Tuple[int, int]] = []
        for s, e in zip(sorted(self.starts), sorted(self.finishes)):
            if e < i:
                continue
            result.append((max(s, i), e))
        return result


class DirectConstraintIndex:
    """Fallback for constraints whose sides cannot be separated: re-evaluate under every environment"""

    def __init__(self, constraint: Constraint, trace: Trace):
        self.constraint = constraint
        self.trace = trace
        self.points = np.zeros(len(trace), dtype=bool)
        self.subupdates = 0

    def init_instantiation(self, env: Mapping[FreezeVar, object], i: int = 0) -> Tuple[np.ndarray, IntervalList, None]:
        self.points = np.broadcast_to(
            np.asarray(self.constraint.holds(self.trace.values, env), dtype=bool), (len(self.trace),)
        ).copy()
        return self.points, transform(self.points, i), None

    def update_signal_constraint(self, i: int, env: Mapping[FreezeVar, object]) -> IntervalList:
        return self.init_instantiation(env, i)[1]


def build_sorted(constraint: Constraint, trace: Trace):
    """Index for one constraint node of a formula"""
    if constraint.separable and not constraint.lhs.frozen() and not constraint.rhs.signals():
        return SortedConstraintIndex(constraint, trace)
    return DirectConstraintIndex(constraint, trace)
