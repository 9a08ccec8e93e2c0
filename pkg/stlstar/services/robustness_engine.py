"""Quantitative robustness.

Robustness of a negation-free formula is bracketed by the conservative range
of its atoms. A binary search then narrows the range with Boolean monitor
calls on threshold-transformed formulas: the transform at r holds iff the
robustness is at least r (up to ties, which either side may take).
"""
import math
from collections import deque
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Union

import numpy as np
from loguru import logger

from stlstar.config import get_settings
from stlstar.errors import FormulaError, STLStarError
from stlstar.formula import (
    Always,
    And,
    BinOp,
    Constraint,
    Eventually,
    Formula,
    Freeze,
    FreezeEnvironment,
    FreezeVar,
    Not,
    Or,
    Predicate,
    Range,
    Release,
    SyntaxTree,
    Until,
    build_syntax_tree,
    negation_normal_form,
    threshold_transform,
    values_over,
    walk,
)
from stlstar.models import MonitorMode, RobustnessEstimate, RobustnessStep
from stlstar.services.boolean_monitor import check_inputs, boolean_monitor
from stlstar.services.oracle import oracle_rho
from stlstar.trace import Trace


# ---------------------------------------------------------------------------
# Sliding-window extrema
# ---------------------------------------------------------------------------

def sliding_max(values: np.ndarray, first: np.ndarray, last: np.ndarray) -> np.ndarray:
    """out[i] = max(values[first[i]..last[i]]), -inf for empty windows.

    Both bound arrays must be non-decreasing; a monotone deque keeps the
    candidate maxima so the whole pass is linear.
    """
    n = len(first)
    out = np.full(n, -math.inf)
    window = deque()
    right = 0
    for i in range(n):
        while right <= last[i]:
            while window and values[window[-1]] <= values[right]:
                window.pop()
            window.append(right)
            right += 1
        while window and window[0] < first[i]:
            window.popleft()
        if window and first[i] <= last[i]:
            out[i] = values[window[0]]
    return out


def sliding_min(values: np.ndarray, first: np.ndarray, last: np.ndarray) -> np.ndarray:
    out = -sliding_max(-np.asarray(values, dtype=float), first, last)
    out[np.asarray(first) > np.asarray(last)] = math.inf
    return out


def _suffix_max(values: np.ndarray) -> np.ndarray:
    """Suffix maxima with a trailing -inf sentinel at index n"""
    return np.append(np.maximum.accumulate(values[::-1])[::-1], -math.inf)


def eventually_rho(x: np.ndarray, trace: Trace, window) -> np.ndarray:
    first, last = trace.window_bounds(window.lo, window.hi)
    if not window.bounded:
        return _suffix_max(x)[first]
    return sliding_max(x, first, last)


def always_rho(x: np.ndarray, trace: Trace, window) -> np.ndarray:
    return -eventually_rho(-x, trace, window)


def _untimed_until(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """out[i] = max(y[i], min(x[i], out[i+1])); trailing -inf sentinel"""
    n = len(x)
    out = np.empty(n + 1)
    out[n] = -math.inf
    for i in range(n - 1, -1, -1):
        out[i] = max(y[i], min(x[i], out[i + 1]))
    return out


def until_rho(x: np.ndarray, y: np.ndarray, trace: Trace, window) -> np.ndarray:
    n = len(x)
    first, last = trace.window_bounds(window.lo, window.hi)
    if not window.bounded:
        # witnesses past first[i]: x must hold on [i, first[i]) and then untimed until from first[i]
        tail = _untimed_until(x, y)[first]
        prefix = sliding_min(x, np.arange(n), first - 1)
        return np.minimum(prefix, tail)
    out = np.full(n, -math.inf)
    for i in range(n):
        if first[i] > last[i]:
            continue
        # prefix minimum of x over [i, j) for j = i..last[i]
        prefix = np.concatenate(([math.inf], np.minimum.accumulate(x[i:last[i]])))
        candidates = np.minimum(y[first[i]:last[i] + 1], prefix[first[i] - i:])
        out[i] = candidates.max()
    return out


def release_rho(x: np.ndarray, y: np.ndarray, trace: Trace, window) -> np.ndarray:
    return -until_rho(-x, -y, trace, window)


# ---------------------------------------------------------------------------
# Conservative range
# ---------------------------------------------------------------------------

def _chain(tree: SyntaxTree, variables) -> List[FreezeVar]:
    """Variables ordered outermost first"""
    return sorted(variables, key=lambda var: tree.subtrees[var].depth)


def _tuple_count(n: int, m: int) -> int:
    return math.comb(n + m - 1, m)


def _instantiations(n: int, m: int) -> np.ndarray:
    """All non-decreasing index tuples of length m, one per row"""
    if m == 1:
        return np.arange(n).reshape(-1, 1)
    if m == 2:
        return np.column_stack(np.triu_indices(n))
    return np.array(list(combinations_with_replacement(range(n), m)), dtype=int).reshape(-1, m)


def _frozen_ranges(trace: Trace, variables) -> Dict[FreezeVar, Range]:
    return {var: (float(trace.signal(var[0]).min()), float(trace.signal(var[0]).max())) for var in variables}


def _signal_ranges(trace: Trace) -> Dict[int, Range]:
    return {k: (float(trace.signal(k).min()), float(trace.signal(k).max())) for k in range(1, trace.dimension + 1)}


def _finite_extrema(values, what) -> Range:
    """Extrema over the finite entries; samples where `what` is infinite saturate the search"""
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        raise FormulaError(f"{what} is never finite on this trace")
    return float(finite.min()), float(finite.max())


def _threshold_range(constraint: Constraint, tree: SyntaxTree, trace: Trace, fast: bool, limit: int) -> Range:
    """Extrema of f2 over every admissible freeze environment"""
    variables = _chain(tree, constraint.rhs.frozen())
    n = len(trace)
    if not variables:
        return _finite_extrema([constraint.rhs.evaluate(None, {})], constraint.rhs)
    exact = _tuple_count(n, len(variables)) <= limit
    if fast or not exact:
        logger.debug(f"Bounding {constraint.rhs} by interval arithmetic")
        lo, hi = constraint.rhs.bounds(_signal_ranges(trace), _frozen_ranges(trace, variables))
        if math.isfinite(lo) and math.isfinite(hi):
            return lo, hi
        if not exact:
            raise FormulaError(
                f"{constraint.rhs} has unbounded interval bounds and more than {limit} environments to enumerate"
            )
        logger.debug(f"Interval bounds of {constraint.rhs} are unbounded, enumerating environments")
    rows = _instantiations(n, len(variables))
    env = {var: trace.values[rows[:, c], var[0] - 1] for c, var in enumerate(variables)}
    return _finite_extrema(constraint.rhs.evaluate(None, env), constraint.rhs)


def _atom_range(atom: Formula, tree: SyntaxTree, trace: Trace, fast: bool, limit: int) -> Range:
    if isinstance(atom, Predicate):
        return _finite_extrema(np.broadcast_to(atom.robustness(trace.values), (len(trace),)), atom)
    if atom.separable:
        lo1, hi1 = _finite_extrema(values_over(atom.lhs, trace.values, {}), atom.lhs)
        lo2, hi2 = _threshold_range(atom, tree, trace, fast, limit)
    else:
        variables = atom.lhs.frozen() | atom.rhs.frozen()
        lo1, hi1 = BinOp("-", atom.lhs, atom.rhs).bounds(_signal_ranges(trace), _frozen_ranges(trace, variables))
        lo2 = hi2 = 0.0
    if atom.op.is_upper:
        return lo1 - hi2, hi1 - lo2
    return lo2 - hi1, hi2 - lo1


# ---------------------------------------------------------------------------
# Exact pointwise robustness
# ---------------------------------------------------------------------------

def robustness_baseline(f: Union[Formula, SyntaxTree], trace: Trace) -> float:
    """Exact robustness at position 0 by per-environment dynamic programming"""
    tree = f if isinstance(f, SyntaxTree) else build_syntax_tree(f)
    check_inputs(tree, trace)
    n = len(trace)
    env = FreezeEnvironment()
    vectors: Dict[int, np.ndarray] = {}

    def evaluate(index: int) -> None:
        node = tree.node(index)
        kids = [vectors[c] for c in tree.children[index]]
        if isinstance(node, Predicate):
            result = node.robustness(trace.values)
        elif isinstance(node, Constraint):
            result = node.robustness(trace.values, env)
        elif isinstance(node, Not):
            result = -kids[0]
        elif isinstance(node, And):
            result = np.minimum(kids[0], kids[1])
        elif isinstance(node, Or):
            result = np.maximum(kids[0], kids[1])
        elif isinstance(node, Eventually):
            result = eventually_rho(kids[0], trace, node.interval)
        elif isinstance(node, Always):
            result = always_rho(kids[0], trace, node.interval)
        elif isinstance(node, Until):
            result = until_rho(kids[0], kids[1], trace, node.interval)
        elif isinstance(node, Release):
            result = release_rho(kids[0], kids[1], trace, node.interval)
        else:
            raise FormulaError(f"cannot evaluate {node.kind.value}")
        vectors[index] = np.broadcast_to(np.asarray(result, dtype=float), (n,))

    def order(nodes) -> List[int]:
        return sorted((i for i in nodes if not isinstance(tree.node(i), Freeze)), reverse=True)

    def rec(var: FreezeVar, t: int) -> None:
        sub = tree.subtrees[var]
        values = np.full(n, -math.inf)
        schedule = order(sub.nodes)
        for i in range(t, n):
            env[var] = float(trace.values[i, var[0] - 1])
            for child in sub.children:
                rec(child, i)
            for index in schedule:
                evaluate(index)
            values[i] = vectors[sub.root][i]
        vectors[sub.parent] = values

    for var in tree.top_variables:
        rec(var, 0)
    for index in order(tree.top):
        evaluate(index)
    return float(vectors[1][0])


def relative_error(estimate: float, exact: float) -> Optional[float]:
    """|estimate - exact| / |exact|; the absolute error when exact is 0, None when exact is infinite"""
    if not math.isfinite(exact):
        return None
    error = abs(estimate - exact)
    return error / abs(exact) if exact != 0 else error


class RobustnessEngine:
    """Robustness estimates by binary search over Boolean verdicts, or exactly"""

    def conservative_range(self, f: Formula, trace: Trace, fast: bool = False) -> Range:
        """[a, b] containing the robustness of f at every position and environment"""
        g = negation_normal_form(f)
        tree = build_syntax_tree(g)
        check_inputs(tree, trace)
        limit = get_settings().exact_range_limit
        ranges = [_atom_range(node, tree, trace, fast, limit) for node in walk(g) if node.is_atom]
        if not ranges:
            raise FormulaError("formula has no atoms")
        lo, hi = min(lo for lo, _ in ranges), max(hi for _, hi in ranges)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise FormulaError(f"conservative range [{lo}, {hi}] is unbounded")
        return lo, hi

    def search_steps(self, width: float, epsilon: float) -> int:
        """Number of halvings that bring `width` down to at most `epsilon`"""
        if not math.isfinite(width):
            raise FormulaError(f"cannot bisect a range of width {width}")
        if width <= epsilon:
            return 0
        return max(0, math.ceil(math.log2(width / epsilon) - 1e-12))

    def robustness(
        self,
        f: Formula,
        trace: Trace,
        epsilon: Optional[float] = None,
        mode: Union[MonitorMode, str] = MonitorMode.INTERVAL,
        early_stop: bool = False,
        fast_range: bool = False,
    ) -> RobustnessEstimate:
        epsilon = get_settings().default_epsilon if epsilon is None else epsilon
        if not epsilon > 0:
            raise STLStarError(f"epsilon must be positive, got {epsilon}")
        mode = MonitorMode(mode)
        if mode is not MonitorMode.INTERVAL:
            value = robustness_baseline(f, trace) if mode is MonitorMode.BASELINE else oracle_rho(f, trace)
            return RobustnessEstimate(
                estimate=value, lo=value, hi=value, initial_lo=value, initial_hi=value, epsilon=epsilon, mode=mode
            )

        g = negation_normal_form(f)
        a, b = self.conservative_range(g, trace, fast=fast_range)
        lo, hi = a, b
        steps: List[RobustnessStep] = []
        for _ in range(self.search_steps(b - a, epsilon)):
            r = (lo + hi) / 2.0
            verdict, _ = boolean_monitor.monitor(threshold_transform(g, r), trace, early_stop=early_stop)
            steps.append(RobustnessStep(r=r, verdict=verdict))
            logger.debug(f"Threshold {r}: {'holds' if verdict else 'fails'}")
            if verdict:
                lo = r
            else:
                hi = r
        return RobustnessEstimate(
            estimate=(lo + hi) / 2.0,
            lo=lo,
            hi=hi,
            initial_lo=a,
            initial_hi=b,
            epsilon=epsilon,
            n_calls=len(steps),
            mode=mode,
            steps=steps,
        )


robustness_engine = RobustnessEngine()
