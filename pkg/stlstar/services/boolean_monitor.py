"""Boolean STL* monitoring.

`BooleanMonitor` walks the freeze variables outermost first. For every
instantiation of a variable it brings the constraint indexes of that
variable's subtree up to date, recurses into the variables bound below, and
evaluates the remaining subtree nodes as interval lists from the highest
node index down. The truth value of the freeze node at that instantiation
is then read off the subtree root's first interval.

`BaselineMonitor` has the same recursion but evaluates every node as a
full boolean vector with next-true scans instead of interval lists.
"""
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from stlstar.errors import DimensionMismatch, FormulaError, TraceError
from stlstar.formula import (
    Always,
    And,
    Constraint,
    Eventually,
    Formula,
    Freeze,
    FreezeEnvironment,
    FreezeVar,
    Not,
    Or,
    Predicate,
    Release,
    SyntaxTree,
    Until,
    build_syntax_tree,
    max_dimension,
    var_name,
)
from stlstar.models import MonitorStats
from stlstar.services import interval_engine as engine
from stlstar.services.constraint_index import build_sorted
from stlstar.services.interval_engine import IntervalList
from stlstar.trace import Trace

Observer = Callable[[FreezeVar, int, "MonitorState"], None]


def _as_tree(formula: Union[Formula, SyntaxTree]) -> SyntaxTree:
    return formula if isinstance(formula, SyntaxTree) else build_syntax_tree(formula)


def check_inputs(tree: SyntaxTree, trace: Trace) -> None:
    if len(trace) == 0:
        raise TraceError("cannot monitor an empty trace")
    needed = max_dimension(tree.formula)
    if needed > trace.dimension:
        raise DimensionMismatch(f"formula reads s{needed} but the trace has {trace.dimension} dimensions")


class EarlyStop:
    """Decides a G/F-rooted formula from the outermost freeze variable's loop.

    Applies when the root's body reaches exactly one freeze operator through
    And/Or nodes only and every other branch of that path is freeze-free.
    """

    def __init__(self, tree: SyntaxTree, var: FreezeVar, path: Tuple[int, ...], sides: Tuple[int, ...]):
        self.tree = tree
        self.var = var
        self.path = path
        self.sides = sides
        root = tree.node(1)
        self.window = root.interval
        self.universal = isinstance(root, Always)

    @classmethod
    def plan(cls, tree: SyntaxTree) -> Optional["EarlyStop"]:
        root = tree.node(1)
        if not isinstance(root, (Always, Eventually)) or len(tree.top_variables) != 1:
            return None
        var = tree.top_variables[0]
        target = tree.subtrees[var].parent
        path = []
        sides = []
        node = tree.children[1][0]
        while node != target:
            if not isinstance(tree.node(node), (And, Or)):
                return None
            left, right = tree.children[node]
            path.append(node)
            # the freeze node has a larger index than every node of an earlier sibling branch
            if right <= target:
                nxt, side = right, left
            else:
                nxt, side = left, right
            sides.append(side)
            node = nxt
        for side in sides:
            if any(tree.owner[i] is not None or isinstance(tree.node(i), Freeze) for i in _branch(tree, side)):
                return None
        return cls(tree, var, tuple(path), tuple(sides))

    def body(self, node: int, i: int, points: np.ndarray, value_at: Callable[[int, int], bool]) -> bool:
        """Value of the root's body at sample i"""
        if node == self.tree.subtrees[self.var].parent:
            return bool(points[i])
        if node in self.path:
            left, right = self.tree.children[node]
            combine = all if isinstance(self.tree.node(node), And) else any
            return combine(self.body(c, i, points, value_at) for c in (left, right))
        return value_at(node, i)

    def decide(self, trace: Trace, i: int, points: np.ndarray, value_at: Callable[[int, int], bool]) -> Optional[bool]:
        offset = trace.times[i] - trace.times[0]
        if offset > self.window.hi:
            return self.universal
        if offset < self.window.lo:
            return None
        holds = self.body(self.tree.children[1][0], i, points, value_at)
        if self.universal and not holds:
            return False
        if not self.universal and holds:
            return True
        return None


def _branch(tree: SyntaxTree, node: int) -> List[int]:
    nodes = [node]
    for child in tree.children[node]:
        nodes.extend(_branch(tree, child))
    return nodes


class _Decided(Exception):
    def __init__(self, verdict: bool):
        self.verdict = verdict


class MonitorState:
    """Per-run storage: interval lists per node, constraint indexes, freeze environment, statistics"""

    def __init__(self, tree: SyntaxTree, trace: Trace, pointwise: bool = True, observer: Optional[Observer] = None):
        self.tree = tree
        self.trace = trace
        self.n = len(trace)
        self.pointwise = pointwise
        self.observer = observer
        self.env = FreezeEnvironment()
        self.intervals: Dict[int, IntervalList] = {}
        self.points: Dict[int, np.ndarray] = {}
        self.base: Dict[int, IntervalList] = {}
        self.indexes = {}
        self.stats = MonitorStats()
        self.early: Optional[EarlyStop] = None

        for index in tree.indices:
            node = tree.node(index)
            if isinstance(node, Predicate):
                self.base[index] = engine.transform(np.broadcast_to(node.holds(trace.values), (self.n,)))
                self.intervals[index] = self.base[index]
            elif isinstance(node, Constraint):
                self.indexes[index] = build_sorted(node, trace)

        # non-atom, non-freeze nodes per subtree, highest index first
        self.schedule: Dict[Optional[FreezeVar], List[int]] = {}
        for var in (None,) + tree.freeze_order:
            nodes = tree.top if var is None else tree.subtrees[var].nodes
            self.schedule[var] = sorted(
                (i for i in nodes if not tree.node(i).is_atom and not isinstance(tree.node(i), Freeze)),
                reverse=True,
            )
        self.constraints: Dict[FreezeVar, List[int]] = {
            var: [i for i in tree.subtrees[var].nodes if i in self.indexes] for var in tree.freeze_order
        }

    def child_list(self, index: int, k: int) -> IntervalList:
        if index in self.base:
            return engine.clip(self.base[index], k)
        return self.intervals[index]

    def compute_subformula(self, index: int, k: int) -> IntervalList:
        """Interval list of a non-atom node from its children's current lists, clipped to >= k"""
        node = self.tree.node(index)
        kids = [self.child_list(c, k) for c in self.tree.children[index]]
        if isinstance(node, Not):
            result = engine.combine_not(kids[0], self.n, k)
        elif isinstance(node, And):
            result = engine.combine_and(kids[0], kids[1])
        elif isinstance(node, Or):
            result = engine.combine_or(kids[0], kids[1])
        elif isinstance(node, Eventually):
            result = engine.eventually(kids[0], node.interval, self.trace, k, self.pointwise)
        elif isinstance(node, Always):
            result = engine.always(kids[0], node.interval, self.trace, k, self.pointwise)
        elif isinstance(node, Until):
            result = engine.until(kids[0], kids[1], node.interval, self.trace, k, self.pointwise)
        elif isinstance(node, Release):
            result = engine.release(kids[0], kids[1], node.interval, self.trace, k, self.pointwise)
        else:
            raise FormulaError(f"compute_subformula cannot evaluate {node.kind.value}")
        self.intervals[index] = result
        if len(result) > self.stats.max_intervals.get(index, 0):
            self.stats.max_intervals[index] = len(result)
        return result

    def rec_stlstar(self, var: FreezeVar, t: int) -> None:
        """Truth value of var's freeze node for every instantiation t..n-1"""
        sub = self.tree.subtrees[var]
        name = var_name(var)
        points = np.zeros(self.n, dtype=bool)
        dim = var[0] - 1
        early = self.early if self.early is not None and var == self.early.var else None
        for i in range(t, self.n):
            self.env[var] = float(self.trace.values[i, dim])
            self.stats.iterations[name] = self.stats.iterations.get(name, 0) + 1
            if not sub.children:
                self.stats.instantiations += 1
            if sub.enclosing is None:
                self.stats.outer_iterations += 1

            for c in self.constraints[var]:
                index = self.indexes[c]
                if i == t:
                    self.intervals[c] = index.init_instantiation(self.env, i)[1]
                else:
                    self.intervals[c] = index.update_signal_constraint(i, self.env)
            for child in sub.children:
                self.rec_stlstar(child, i)
            for index in self.schedule[var]:
                self.compute_subformula(index, i)

            root = self.intervals[sub.root] if sub.root not in self.base else engine.clip(self.base[sub.root], i)
            points[i] = bool(root) and root[0][0] == i
            if self.observer is not None:
                self.observer(var, i, self)
            if early is not None:
                verdict = early.decide(self.trace, i, points, self.value_at)
                if verdict is not None:
                    raise _Decided(verdict)
        self.points[sub.parent] = points
        self.intervals[sub.parent] = engine.transform(points, t)

    def value_at(self, index: int, i: int) -> bool:
        return engine.contains(self.child_list(index, 0), i)

    def subupdates(self) -> int:
        return sum(index.subupdates for index in self.indexes.values())


class BooleanMonitor:
    """Interval-list Boolean monitor"""

    def monitor(
        self,
        formula: Union[Formula, SyntaxTree],
        trace: Trace,
        early_stop: bool = False,
        pointwise: bool = True,
        observer: Optional[Observer] = None,
    ) -> Tuple[bool, MonitorStats]:
        """(trace, 0, zero environment) |= formula, with run statistics"""
        tree = _as_tree(formula)
        check_inputs(tree, trace)
        state = MonitorState(tree, trace, pointwise, observer)
        if early_stop:
            state.early = EarlyStop.plan(tree)
            if state.early is None:
                logger.debug("Early stop does not apply to this formula shape")
            else:
                for side in state.early.sides:
                    for index in sorted(_branch(tree, side), reverse=True):
                        if index in state.schedule[None]:
                            state.compute_subformula(index, 0)

        try:
            for var in tree.top_variables:
                state.rec_stlstar(var, 0)
        except _Decided as decided:
            state.stats.early_stopped = True
            state.stats.subupdates = state.subupdates()
            return decided.verdict, state.stats

        for index in state.schedule[None]:
            state.compute_subformula(index, 0)
        top = state.child_list(1, 0)
        verdict = bool(top) and top[0][0] == 0
        state.stats.subupdates = state.subupdates()
        logger.debug(f"Interval monitor: verdict={verdict}, stats={state.stats}")
        return verdict, state.stats


# ---------------------------------------------------------------------------
# Pointwise baseline
# ---------------------------------------------------------------------------

def _next_true(x: np.ndarray) -> np.ndarray:
    """nt[j] = smallest j' >= j with x[j'], else n; nt has a trailing sentinel at index n"""
    n = len(x)
    candidates = np.where(x, np.arange(n), n)
    nt = np.minimum.accumulate(candidates[::-1])[::-1]
    return np.append(nt, n)


def eventually_vector(x: np.ndarray, trace: Trace, window) -> np.ndarray:
    first, last = trace.window_bounds(window.lo, window.hi)
    nt = _next_true(x)
    return (first <= last) & (nt[first] <= last)


def always_vector(x: np.ndarray, trace: Trace, window) -> np.ndarray:
    return ~eventually_vector(~x, trace, window)


def until_vector(x: np.ndarray, y: np.ndarray, trace: Trace, window) -> np.ndarray:
    """Smallest y-witness in the window, reached before x first fails"""
    first, last = trace.window_bounds(window.lo, window.hi)
    witness = _next_true(y)[first]
    blocked = _next_true(~x)[:-1]
    return (first <= last) & (witness <= np.minimum(last, blocked))


def release_vector(x: np.ndarray, y: np.ndarray, trace: Trace, window) -> np.ndarray:
    return ~until_vector(~x, ~y, trace, window)


class BaselineMonitor:
    """Non-interval monitor: one boolean vector per node and environment"""

    def monitor(
        self, formula: Union[Formula, SyntaxTree], trace: Trace, early_stop: bool = False
    ) -> Tuple[bool, MonitorStats]:
        tree = _as_tree(formula)
        check_inputs(tree, trace)
        n = len(trace)
        stats = MonitorStats()
        env = FreezeEnvironment()
        vectors: Dict[int, np.ndarray] = {}
        static: Dict[int, np.ndarray] = {}
        for index in tree.indices:
            node = tree.node(index)
            if isinstance(node, Predicate):
                static[index] = np.broadcast_to(np.asarray(node.holds(trace.values), dtype=bool), (n,))

        def value(index: int) -> np.ndarray:
            return static[index] if index in static else vectors[index]

        def evaluate(index: int) -> None:
            node = tree.node(index)
            kids = [value(c) for c in tree.children[index]]
            if isinstance(node, Constraint):
                result = np.broadcast_to(np.asarray(node.holds(trace.values, env), dtype=bool), (n,))
            elif isinstance(node, Not):
                result = ~kids[0]
            elif isinstance(node, And):
                result = kids[0] & kids[1]
            elif isinstance(node, Or):
                result = kids[0] | kids[1]
            elif isinstance(node, Eventually):
                result = eventually_vector(kids[0], trace, node.interval)
            elif isinstance(node, Always):
                result = always_vector(kids[0], trace, node.interval)
            elif isinstance(node, Until):
                result = until_vector(kids[0], kids[1], trace, node.interval)
            elif isinstance(node, Release):
                result = release_vector(kids[0], kids[1], trace, node.interval)
            else:
                raise FormulaError(f"cannot evaluate {node.kind.value}")
            vectors[index] = result

        def order(nodes) -> List[int]:
            return sorted(
                (i for i in nodes if i not in static and not isinstance(tree.node(i), Freeze)), reverse=True
            )

        early = EarlyStop.plan(tree) if early_stop else None
        if early is not None:
            for side in early.sides:
                for index in order(_branch(tree, side)):
                    evaluate(index)

        def rec(var: FreezeVar, t: int) -> None:
            sub = tree.subtrees[var]
            name = var_name(var)
            points = np.zeros(n, dtype=bool)
            schedule = order(sub.nodes)
            watch = early if early is not None and var == early.var else None
            for i in range(t, n):
                env[var] = float(trace.values[i, var[0] - 1])
                stats.iterations[name] = stats.iterations.get(name, 0) + 1
                if not sub.children:
                    stats.instantiations += 1
                if sub.enclosing is None:
                    stats.outer_iterations += 1
                for child in sub.children:
                    rec(child, i)
                for index in schedule:
                    evaluate(index)
                points[i] = value(sub.root)[i]
                if watch is not None:
                    verdict = watch.decide(trace, i, points, lambda node, j: bool(value(node)[j]))
                    if verdict is not None:
                        raise _Decided(verdict)
            vectors[sub.parent] = points

        try:
            for var in tree.top_variables:
                rec(var, 0)
        except _Decided as decided:
            stats.early_stopped = True
            return decided.verdict, stats
        for index in order(tree.top):
            evaluate(index)
        verdict = bool(value(1)[0])
        logger.debug(f"Baseline monitor: verdict={verdict}")
        return verdict, stats


boolean_monitor = BooleanMonitor()
baseline_monitor = BaselineMonitor()
