"""STL* formulas: expressions, syntax nodes, syntax tree and formula transforms"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import ClassVar, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from stlstar.errors import (
    DuplicateFreezeBinding,
    FormulaError,
    UnboundFreezeVariable,
)
from stlstar.models import Comparison, NodeKind

# (signal dimension k, occurrence tag h), both 1-based
FreezeVar = Tuple[int, int]
Range = Tuple[float, float]


def var_name(var: FreezeVar) -> str:
    return f"s{var[0]}*{var[1]}"


def _num(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

class Expr:
    """Arithmetic expression over current signal values and frozen values.

    `evaluate` is written with numpy operations so that `samples` may be a
    single sample row, the whole (n, dm) value matrix, or None when the
    expression only reads frozen values. Environment values may likewise be
    arrays, which lets callers evaluate many environments at once.
    """

    precedence: ClassVar[int] = 4

    def evaluate(self, samples, env: Mapping[FreezeVar, object]):
        raise NotImplementedError

    def signals(self) -> FrozenSet[int]:
        return frozenset()

    def frozen(self) -> FrozenSet[FreezeVar]:
        return frozenset()

    def bounds(self, signal_ranges: Mapping[int, Range], frozen_ranges: Mapping[FreezeVar, Range]) -> Range:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def evaluate(self, samples, env):
        return self.value

    def bounds(self, signal_ranges, frozen_ranges):
        return (self.value, self.value)

    def __str__(self) -> str:
        return _num(self.value)


@dataclass(frozen=True)
class Signal(Expr):
    dim: int

    def evaluate(self, samples, env):
        if samples is None:
            raise FormulaError(f"s{self.dim} needs sample values")
        return samples[..., self.dim - 1]

    def signals(self):
        return frozenset((self.dim,))

    def bounds(self, signal_ranges, frozen_ranges):
        return signal_ranges[self.dim]

    def __str__(self) -> str:
        return f"s{self.dim}"


@dataclass(frozen=True)
class Frozen(Expr):
    var: FreezeVar

    def evaluate(self, samples, env):
        try:
            return env[self.var]
        except KeyError:
            raise UnboundFreezeVariable(var_name(self.var)) from None

    def frozen(self):
        return frozenset((self.var,))

    def bounds(self, signal_ranges, frozen_ranges):
        return frozen_ranges[self.var]

    def __str__(self) -> str:
        return var_name(self.var)


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    precedence: ClassVar[int] = 3

    def evaluate(self, samples, env):
        return -self.arg.evaluate(samples, env)

    def signals(self):
        return self.arg.signals()

    def frozen(self):
        return self.arg.frozen()

    def bounds(self, signal_ranges, frozen_ranges):
        lo, hi = self.arg.bounds(signal_ranges, frozen_ranges)
        return (-hi, -lo)

    def __str__(self) -> str:
        inner = str(self.arg)
        if self.arg.precedence < self.precedence:
            inner = f"({inner})"
        return f"-{inner}"


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    @property
    def precedence(self) -> int:  # type: ignore[override]
        return _PRECEDENCE[self.op]

    def evaluate(self, samples, env):
        a = self.left.evaluate(samples, env)
        b = self.right.evaluate(samples, env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.true_divide(a, b)

    def signals(self):
        return self.left.signals() | self.right.signals()

    def frozen(self):
        return self.left.frozen() | self.right.frozen()

    def bounds(self, signal_ranges, frozen_ranges):
        a, b = self.left.bounds(signal_ranges, frozen_ranges)
        c, d = self.right.bounds(signal_ranges, frozen_ranges)
        if self.op == "+":
            return (a + c, b + d)
        if self.op == "-":
            return (a - d, b - c)
        if self.op == "/":
            if c <= 0.0 <= d:
                return (-math.inf, math.inf)
            c, d = 1.0 / d, 1.0 / c
        products = [x * y for x in (a, b) for y in (c, d)]
        products = [p for p in products if not math.isnan(p)] or [0.0]
        return (min(products), max(products))

    def __str__(self) -> str:
        left = str(self.left)
        if self.left.precedence < self.precedence:
            left = f"({left})"
        right = str(self.right)
        if self.right.precedence < self.precedence or (
            self.right.precedence == self.precedence and self.op in "-/"
        ):
            right = f"({right})"
        return f"{left} {self.op} {right}"


@dataclass(frozen=True)
class Call(Expr):
    """abs, min or max"""
    fn: str
    args: Tuple[Expr, ...]

    def evaluate(self, samples, env):
        values = [arg.evaluate(samples, env) for arg in self.args]
        if self.fn == "abs":
            return np.abs(values[0])
        if self.fn == "min":
            return np.minimum(values[0], values[1])
        return np.maximum(values[0], values[1])

    def signals(self):
        return frozenset().union(*(arg.signals() for arg in self.args))

    def frozen(self):
        return frozenset().union(*(arg.frozen() for arg in self.args))

    def bounds(self, signal_ranges, frozen_ranges):
        ranges = [arg.bounds(signal_ranges, frozen_ranges) for arg in self.args]
        if self.fn == "abs":
            lo, hi = ranges[0]
            if lo >= 0:
                return (lo, hi)
            if hi <= 0:
                return (-hi, -lo)
            return (0.0, max(-lo, hi))
        (a, b), (c, d) = ranges
        if self.fn == "min":
            return (min(a, c), min(b, d))
        return (max(a, c), max(b, d))

    def __str__(self) -> str:
        return f"{self.fn}({', '.join(str(arg) for arg in self.args)})"


def values_over(expr: Expr, samples: np.ndarray, env: Mapping[FreezeVar, object]) -> np.ndarray:
    """Evaluate over every row of `samples`, always returning a float array of length n"""
    result = np.asarray(expr.evaluate(samples, env), dtype=float)
    return np.broadcast_to(result, (samples.shape[0],)).astype(float, copy=False)


def constant_value(expr: Expr) -> Optional[float]:
    """Value of an expression that reads neither signals nor frozen values"""
    if expr.signals() or expr.frozen():
        return None
    return float(expr.evaluate(None, {}))


# ---------------------------------------------------------------------------
# Formula nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Time window [lo, hi]; hi may be infinite"""
    lo: float = 0.0
    hi: float = math.inf

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo < 0 or self.lo > self.hi or math.isinf(self.lo):
            raise FormulaError(f"invalid interval [{self.lo},{self.hi}]")

    @property
    def bounded(self) -> bool:
        return not math.isinf(self.hi)

    @property
    def starts_at_zero(self) -> bool:
        return self.lo == 0

    def __str__(self) -> str:
        return f"[{_num(self.lo)},{_num(self.hi)}]"


UNBOUNDED = Interval()


class Formula:
    """Base class of STL* syntax nodes"""

    kind: ClassVar[NodeKind]

    @property
    def children(self) -> Tuple["Formula", ...]:
        return ()

    def with_children(self, *children: "Formula") -> "Formula":
        return self

    @property
    def is_atom(self) -> bool:
        return self.kind in (NodeKind.PREDICATE, NodeKind.CONSTRAINT)


@dataclass(frozen=True)
class Predicate(Formula):
    """f(s) op bound, over current signal values only"""
    expr: Expr
    op: Comparison
    bound: float
    kind: ClassVar[NodeKind] = NodeKind.PREDICATE

    def robustness(self, samples):
        value = self.expr.evaluate(samples, {})
        return value - self.bound if self.op.is_upper else self.bound - value

    def holds(self, samples):
        return self.op.holds(self.expr.evaluate(samples, {}), self.bound)

    def __str__(self) -> str:
        return f"{self.expr} {self.op.value} {_num(self.bound)}"


@dataclass(frozen=True)
class Constraint(Formula):
    """f1(s) op f2(s*); non-separable constraints keep both sides whole"""
    lhs: Expr
    op: Comparison
    rhs: Expr
    separable: bool = True
    kind: ClassVar[NodeKind] = NodeKind.CONSTRAINT

    def threshold(self, env: Mapping[FreezeVar, object]):
        return self.rhs.evaluate(None, env)

    def robustness(self, samples, env):
        a = self.lhs.evaluate(samples, env)
        b = self.rhs.evaluate(samples, env)
        return a - b if self.op.is_upper else b - a

    def holds(self, samples, env):
        return self.op.holds(self.lhs.evaluate(samples, env), self.rhs.evaluate(samples, env))

    def __str__(self) -> str:
        return f"{self.lhs} {self.op.value} {self.rhs}"


@dataclass(frozen=True)
class Not(Formula):
    child: Formula
    kind: ClassVar[NodeKind] = NodeKind.NOT

    @property
    def children(self):
        return (self.child,)

    def with_children(self, child):
        return Not(child)

    def __str__(self) -> str:
        return f"!({self.child})"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    kind: ClassVar[NodeKind] = NodeKind.AND

    @property
    def children(self):
        return (self.left, self.right)

    def with_children(self, left, right):
        return And(left, right)

    def __str__(self) -> str:
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    kind: ClassVar[NodeKind] = NodeKind.OR

    @property
    def children(self):
        return (self.left, self.right)

    def with_children(self, left, right):
        return Or(left, right)

    def __str__(self) -> str:
        return f"({self.left} || {self.right})"


@dataclass(frozen=True)
class Always(Formula):
    child: Formula
    interval: Interval = UNBOUNDED
    kind: ClassVar[NodeKind] = NodeKind.ALWAYS

    @property
    def children(self):
        return (self.child,)

    def with_children(self, child):
        return Always(child, self.interval)

    def __str__(self) -> str:
        return f"G{self.interval} ({self.child})"


@dataclass(frozen=True)
class Eventually(Formula):
    child: Formula
    interval: Interval = UNBOUNDED
    kind: ClassVar[NodeKind] = NodeKind.EVENTUALLY

    @property
    def children(self):
        return (self.child,)

    def with_children(self, child):
        return Eventually(child, self.interval)

    def __str__(self) -> str:
        return f"F{self.interval} ({self.child})"


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    interval: Interval = UNBOUNDED
    kind: ClassVar[NodeKind] = NodeKind.UNTIL

    @property
    def children(self):
        return (self.left, self.right)

    def with_children(self, left, right):
        return Until(left, right, self.interval)

    def __str__(self) -> str:
        return f"(({self.left}) U{self.interval} ({self.right}))"


@dataclass(frozen=True)
class Release(Formula):
    """left R right: right holds at every window sample unless left held strictly before it"""
    left: Formula
    right: Formula
    interval: Interval = UNBOUNDED
    kind: ClassVar[NodeKind] = NodeKind.RELEASE

    @property
    def children(self):
        return (self.left, self.right)

    def with_children(self, left, right):
        return Release(left, right, self.interval)

    def __str__(self) -> str:
        return f"(({self.left}) R{self.interval} ({self.right}))"


@dataclass(frozen=True)
class Freeze(Formula):
    var: FreezeVar
    child: Formula
    kind: ClassVar[NodeKind] = NodeKind.FREEZE

    def __post_init__(self):
        if self.var[0] < 1 or self.var[1] < 1:
            raise FormulaError(f"invalid freeze variable {var_name(self.var)}")

    @property
    def children(self):
        return (self.child,)

    def with_children(self, child):
        return Freeze(self.var, child)

    def __str__(self) -> str:
        return f"freeze({var_name(self.var)}). ({self.child})"


# ---------------------------------------------------------------------------
# Atom canonicalization
# ---------------------------------------------------------------------------

def compare(lhs: Expr, op: Comparison, rhs: Expr) -> Formula:
    """Build the atom(s) for `lhs op rhs`.

    Comparisons without frozen values become predicates. Comparisons with
    frozen values are brought to the f1(s) op f2(s*) shape; a top-level
    abs/min/max that mixes both kinds is split into a conjunction or
    disjunction with the same robustness. Anything left is a non-separable
    constraint.
    """
    if not lhs.frozen() and not rhs.frozen():
        return _predicate(lhs, op, rhs)
    if _mixed_call(lhs):
        return _split_call(lhs, op, rhs)
    if _mixed_call(rhs):
        return _split_call(rhs, op.mirrored, lhs)
    if not lhs.frozen() and not rhs.signals():
        return Constraint(lhs, op, rhs)
    if not rhs.frozen() and not lhs.signals():
        return Constraint(rhs, op.mirrored, lhs)
    split = _additive_split(lhs, rhs)
    if split is not None:
        return Constraint(split[0], op, split[1])
    return Constraint(lhs, op, rhs, separable=False)


def membership(value: Expr, lo: Expr, hi: Expr) -> Formula:
    """value in [lo, hi]"""
    return And(compare(value, Comparison.GE, lo), compare(value, Comparison.LE, hi))


def _predicate(lhs: Expr, op: Comparison, rhs: Expr) -> Predicate:
    bound = constant_value(rhs)
    if bound is not None:
        return Predicate(lhs, op, bound)
    bound = constant_value(lhs)
    if bound is not None:
        return Predicate(rhs, op.mirrored, bound)
    return Predicate(BinOp("-", lhs, rhs), op, 0.0)


def _mixed_call(expr: Expr) -> bool:
    return isinstance(expr, Call) and bool(expr.signals()) and bool(expr.frozen())


def _split_call(call: Call, op: Comparison, other: Expr) -> Formula:
    upper = op.is_upper
    if call.fn == "abs":
        u = call.args[0]
        parts = (compare(u, op, other), compare(Neg(u), op, other))
        return Or(*parts) if upper else And(*parts)
    parts = (compare(call.args[0], op, other), compare(call.args[1], op, other))
    if call.fn == "min":
        return And(*parts) if upper else Or(*parts)
    return Or(*parts) if upper else And(*parts)


def _terms(expr: Expr, sign: int) -> List[Tuple[int, Expr]]:
    if isinstance(expr, BinOp) and expr.op in "+-":
        right_sign = sign if expr.op == "+" else -sign
        return _terms(expr.left, sign) + _terms(expr.right, right_sign)
    if isinstance(expr, Neg):
        return _terms(expr.arg, -sign)
    return [(sign, expr)]


def _sum(terms: Sequence[Tuple[int, Expr]]) -> Expr:
    if not terms:
        return Const(0.0)
    sign, first = terms[0]
    total: Expr = first if sign > 0 else Neg(first)
    for sign, term in terms[1:]:
        total = BinOp("+" if sign > 0 else "-", total, term)
    return total


def _additive_split(lhs: Expr, rhs: Expr) -> Optional[Tuple[Expr, Expr]]:
    """lhs - rhs = S + O with S signal-only and O frozen-or-constant; returns (S, -O)"""
    signal_terms, other_terms = [], []
    for sign, term in _terms(lhs, 1) + _terms(rhs, -1):
        if term.signals() and term.frozen():
            return None
        if term.signals():
            signal_terms.append((sign, term))
        else:
            other_terms.append((-sign, term))
    return _sum(signal_terms), _sum(other_terms)


# ---------------------------------------------------------------------------
# Bindings and environments
# ---------------------------------------------------------------------------

def walk(f: Formula):
    """Pre-order traversal, left child before right child"""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def freeze_variables(f: Formula) -> List[FreezeVar]:
    return [node.var for node in walk(f) if isinstance(node, Freeze)]


def max_dimension(f: Formula) -> int:
    dims = [0]
    for node in walk(f):
        if isinstance(node, Predicate):
            dims.extend(node.expr.signals())
        elif isinstance(node, Constraint):
            dims.extend(node.lhs.signals() | node.rhs.signals())
            dims.extend(var[0] for var in node.lhs.frozen() | node.rhs.frozen())
        elif isinstance(node, Freeze):
            dims.append(node.var[0])
    return max(dims)


def check_bindings(f: Formula) -> None:
    """Every frozen value is bound by an enclosing freeze, each variable bound once"""
    seen = set()

    def visit(node: Formula, bound: FrozenSet[FreezeVar]) -> None:
        if isinstance(node, Freeze):
            if node.var in seen:
                raise DuplicateFreezeBinding(var_name(node.var))
            seen.add(node.var)
            bound = bound | {node.var}
        elif isinstance(node, Constraint):
            for var in sorted(node.lhs.frozen() | node.rhs.frozen()):
                if var not in bound:
                    raise UnboundFreezeVariable(var_name(var))
        for child in node.children:
            visit(child, bound)

    visit(f, frozenset())


class FreezeEnvironment(dict):
    """Map from freeze variable to frozen value"""

    def bind(self, var: FreezeVar, value: float) -> "FreezeEnvironment":
        env = FreezeEnvironment(self)
        env[var] = value
        return env


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subtree:
    """Nodes evaluated under one freeze variable's instantiations"""
    var: FreezeVar
    nodes: Tuple[int, ...]
    root: int
    parent: int
    enclosing: Optional[FreezeVar]
    children: Tuple[FreezeVar, ...]
    depth: int


@dataclass(frozen=True)
class SyntaxTree:
    formula: Formula
    nodes: Tuple[Formula, ...]
    children: Dict[int, Tuple[int, ...]]
    owner: Dict[int, Optional[FreezeVar]]
    subtrees: Dict[FreezeVar, Subtree]
    top: Tuple[int, ...]
    freeze_order: Tuple[FreezeVar, ...]
    top_variables: Tuple[FreezeVar, ...] = field(default=())

    def node(self, index: int) -> Formula:
        return self.nodes[index - 1]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def indices(self) -> range:
        return range(1, len(self.nodes) + 1)

    @property
    def max_depth(self) -> int:
        return max((sub.depth for sub in self.subtrees.values()), default=0)


def build_syntax_tree(f: Formula) -> SyntaxTree:
    """Index nodes in pre-order (children after parents) and partition them by freeze variable"""
    check_bindings(f)
    nodes: List[Formula] = []
    children: Dict[int, Tuple[int, ...]] = {}
    owner: Dict[int, Optional[FreezeVar]] = {}
    freeze_index: Dict[FreezeVar, int] = {}

    stack: List[Tuple[Formula, Optional[FreezeVar], Optional[int]]] = [(f, None, None)]
    while stack:
        node, node_owner, parent = stack.pop()
        nodes.append(node)
        index = len(nodes)
        owner[index] = node_owner
        children[index] = ()
        if parent is not None:
            children[parent] = children[parent] + (index,)
        child_owner = node_owner
        if isinstance(node, Freeze):
            freeze_index[node.var] = index
            child_owner = node.var
        for child in reversed(node.children):
            stack.append((child, child_owner, index))

    freeze_order = tuple(sorted(freeze_index, key=freeze_index.get))
    depth: Dict[FreezeVar, int] = {}
    subtrees: Dict[FreezeVar, Subtree] = {}
    for var in freeze_order:
        parent = freeze_index[var]
        enclosing = owner[parent]
        depth[var] = 1 if enclosing is None else depth[enclosing] + 1
        subtrees[var] = Subtree(
            var=var,
            nodes=tuple(i for i in sorted(owner) if owner[i] == var),
            root=parent + 1,
            parent=parent,
            enclosing=enclosing,
            children=tuple(v for v in freeze_order if owner[freeze_index[v]] == var),
            depth=depth[var],
        )

    return SyntaxTree(
        formula=f,
        nodes=tuple(nodes),
        children=children,
        owner=owner,
        subtrees=subtrees,
        top=tuple(i for i in sorted(owner) if owner[i] is None),
        freeze_order=freeze_order,
        top_variables=tuple(v for v in freeze_order if subtrees[v].enclosing is None),
    )


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def negation_normal_form(f: Formula, negate: bool = False, taken: Optional[set] = None) -> Formula:
    """Push negations down to the atoms and absorb them into the comparisons.

    The negated-until rewrite repeats its right operand; each repeated copy
    binds fresh occurrence tags so that no freeze variable is bound twice.
    """
    if taken is None:
        taken = set(freeze_variables(f))
    if isinstance(f, Predicate):
        return replace(f, op=f.op.negated) if negate else f
    if isinstance(f, Constraint):
        return replace(f, op=f.op.negated) if negate else f
    if isinstance(f, Not):
        return negation_normal_form(f.child, not negate, taken)
    if isinstance(f, Freeze):
        return Freeze(f.var, negation_normal_form(f.child, negate, taken))
    if isinstance(f, (And, Or)):
        left = negation_normal_form(f.left, negate, taken)
        right = negation_normal_form(f.right, negate, taken)
        flip = isinstance(f, And) == negate
        return Or(left, right) if flip else And(left, right)
    if isinstance(f, (Always, Eventually)):
        child = negation_normal_form(f.child, negate, taken)
        flip = isinstance(f, Always) == negate
        return Eventually(child, f.interval) if flip else Always(child, f.interval)
    if isinstance(f, Until):
        left = negation_normal_form(f.left, negate, taken)
        right = negation_normal_form(f.right, negate, taken)
        if not negate:
            return Until(left, right, f.interval)
        if f.interval.starts_at_zero:
            return Or(
                Always(right, f.interval),
                Until(fresh_copy(right, taken), And(left, fresh_copy(right, taken)), f.interval),
            )
        # the rewrite above needs the window to start at the current sample
        return Release(left, right, f.interval)
    if isinstance(f, Release):
        left = negation_normal_form(f.left, negate, taken)
        right = negation_normal_form(f.right, negate, taken)
        return Until(left, right, f.interval) if negate else Release(left, right, f.interval)
    raise FormulaError(f"unsupported node {type(f).__name__}")


def rename_expr(expr: Expr, mapping: Mapping[FreezeVar, FreezeVar]) -> Expr:
    if isinstance(expr, Frozen):
        return Frozen(mapping.get(expr.var, expr.var))
    if isinstance(expr, Neg):
        return Neg(rename_expr(expr.arg, mapping))
    if isinstance(expr, BinOp):
        return BinOp(expr.op, rename_expr(expr.left, mapping), rename_expr(expr.right, mapping))
    if isinstance(expr, Call):
        return Call(expr.fn, tuple(rename_expr(arg, mapping) for arg in expr.args))
    return expr


def fresh_copy(f: Formula, taken: set, mapping: Optional[Dict[FreezeVar, FreezeVar]] = None) -> Formula:
    """Copy of f whose freeze operators bind unused tags; `taken` is updated"""
    mapping = mapping or {}
    if isinstance(f, Freeze):
        dim, tag = f.var
        while (dim, tag) in taken:
            tag += 1
        taken.add((dim, tag))
        return Freeze((dim, tag), fresh_copy(f.child, taken, {**mapping, f.var: (dim, tag)}))
    if isinstance(f, Constraint):
        return replace(f, lhs=rename_expr(f.lhs, mapping), rhs=rename_expr(f.rhs, mapping))
    return f.with_children(*(fresh_copy(child, taken, mapping) for child in f.children))


def is_negation_free(f: Formula) -> bool:
    return not any(isinstance(node, Not) for node in walk(f))


def threshold_transform(f: Formula, r: float) -> Formula:
    """Shift every atom so that the formula holds iff robustness reaches r"""
    if not is_negation_free(f):
        raise FormulaError("threshold transform needs a negation-free formula")
    if r == 0:
        return f
    return _shift(f, float(r))


def _shift(f: Formula, r: float) -> Formula:
    if isinstance(f, Predicate):
        return replace(f, bound=f.bound + r if f.op.is_upper else f.bound - r)
    if isinstance(f, Constraint):
        return replace(f, rhs=BinOp("+" if f.op.is_upper else "-", f.rhs, Const(r)))
    return f.with_children(*(_shift(child, r) for child in f.children))


def atoms(f: Formula) -> List[Formula]:
    return [node for node in walk(f) if node.is_atom]
