"""Brute-force reference semantics, evaluated literally from the definitions.

Exponential in the freeze depth; meant for short traces and for checking
the fast engines against.
"""
import math
from typing import Optional

import numpy as np

from stlstar.config import get_settings
from stlstar.errors import FormulaError, TraceError, TraceIndexError
from stlstar.formula import (
    Always,
    And,
    Constraint,
    Eventually,
    Formula,
    FreezeEnvironment,
    Freeze,
    Not,
    Or,
    Predicate,
    Release,
    Until,
    check_bindings,
)
from stlstar.trace import Trace


def _check(f: Formula, trace: Trace, i: int, limit: Optional[int], env) -> None:
    if not 0 <= i < len(trace):
        raise TraceIndexError(f"position {i} outside trace of length {len(trace)}")
    limit = get_settings().oracle_max_length if limit is None else limit
    if limit and len(trace) > limit:
        raise TraceError(f"trace of length {len(trace)} is too long for the oracle (limit {limit})")
    # a caller-supplied environment may bind free variables
    if not env:
        check_bindings(f)


def _window(trace: Trace, i: int, interval):
    """Positions j >= i with tau_i + a <= tau_j <= tau_i + b, read off the timestamps"""
    start = trace.times[i]
    for j in range(i, len(trace)):
        offset = trace.times[j] - start
        if offset > interval.hi:
            return
        if offset >= interval.lo:
            yield j


class _Evaluator:
    """Recomputes every subformula value on demand; nothing is cached"""

    def __init__(self, trace: Trace, robust: bool):
        self.trace = trace
        self.robust = robust

    # max/min under robustness, any/all under Boolean semantics
    def _join(self, values):
        return max(values, default=-math.inf) if self.robust else any(values)

    def _meet(self, values):
        return min(values, default=math.inf) if self.robust else all(values)

    def value(self, f: Formula, i: int, env: FreezeEnvironment):
        sample = self.trace.values[i]
        if isinstance(f, Predicate):
            return float(f.robustness(sample)) if self.robust else bool(f.holds(sample))
        if isinstance(f, Constraint):
            return float(f.robustness(sample, env)) if self.robust else bool(f.holds(sample, env))
        if isinstance(f, Not):
            child = self.value(f.child, i, env)
            return -child if self.robust else not child
        if isinstance(f, And):
            return self._meet(self.value(child, i, env) for child in f.children)
        if isinstance(f, Or):
            return self._join(self.value(child, i, env) for child in f.children)
        if isinstance(f, Eventually):
            return self._join(self.value(f.child, j, env) for j in _window(self.trace, i, f.interval))
        if isinstance(f, Always):
            return self._meet(self.value(f.child, j, env) for j in _window(self.trace, i, f.interval))
        if isinstance(f, Until):
            return self._until(f, i, env)
        if isinstance(f, Release):
            return self._release(f, i, env)
        if isinstance(f, Freeze):
            frozen = float(self.trace.values[i, f.var[0] - 1])
            return self.value(f.child, i, env.bind(f.var, frozen))
        raise FormulaError(f"unsupported node {type(f).__name__}")

    def _until(self, f: Until, i: int, env: FreezeEnvironment):
        """join over window j of meet(right at j, left at every l in [i, j))"""
        best = self._join(())
        prefix = self._meet(())
        start = self.trace.times[i]
        for j in range(i, len(self.trace)):
            offset = self.trace.times[j] - start
            if offset > f.interval.hi:
                break
            if offset >= f.interval.lo:
                best = self._join((best, self._meet((prefix, self.value(f.right, j, env)))))
            # later candidates are capped by the prefix
            if prefix <= best:
                break
            prefix = self._meet((prefix, self.value(f.left, j, env)))
        return best

    def _release(self, f: Release, i: int, env: FreezeEnvironment):
        """meet over window j of join(right at j, left at some l in [i, j))"""
        worst = self._meet(())
        prefix = self._join(())
        start = self.trace.times[i]
        for j in range(i, len(self.trace)):
            offset = self.trace.times[j] - start
            if offset > f.interval.hi:
                break
            if offset >= f.interval.lo:
                worst = self._meet((worst, self._join((prefix, self.value(f.right, j, env)))))
            if prefix >= worst:
                break
            prefix = self._join((prefix, self.value(f.left, j, env)))
        return worst


def oracle_sat(f: Formula, trace: Trace, i: int = 0, env=None, limit: Optional[int] = None) -> bool:
    """(i, env) |= f by the pointwise definitions"""
    _check(f, trace, i, limit, env)
    return bool(_Evaluator(trace, robust=False).value(f, i, FreezeEnvironment(env or {})))


def oracle_rho(f: Formula, trace: Trace, i: int = 0, env=None, limit: Optional[int] = None) -> float:
    """Robustness of f at position i by the quantitative definitions"""
    _check(f, trace, i, limit, env)
    return float(_Evaluator(trace, robust=True).value(f, i, FreezeEnvironment(env or {})))


def oracle_points(f: Formula, trace: Trace, env=None, limit: Optional[int] = None) -> np.ndarray:
    """Truth value at every position"""
    _check(f, trace, 0, limit, env)
    evaluator = _Evaluator(trace, robust=False)
    env = FreezeEnvironment(env or {})
    return np.array([bool(evaluator.value(f, i, env)) for i in range(len(trace))])
