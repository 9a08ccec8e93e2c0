"""Formula nodes, atom canonicalization, syntax tree and transforms"""
import math

import numpy as np
import pytest

from stlstar.errors import DuplicateFreezeBinding, FormulaError, UnboundFreezeVariable
from stlstar.formula import (
    Always,
    And,
    BinOp,
    Call,
    Const,
    Constraint,
    Eventually,
    Freeze,
    Frozen,
    Interval,
    Neg,
    Not,
    Or,
    Predicate,
    Release,
    Signal,
    Until,
    atoms,
    build_syntax_tree,
    check_bindings,
    compare,
    freeze_variables,
    is_negation_free,
    max_dimension,
    negation_normal_form,
    threshold_transform,
    walk,
)
from stlstar.models import Comparison, NodeKind
from stlstar.parser import parse

WORKED = (
    "F (s2 >= 0.5 && freeze(s1*1). F (s3 >= 0.5 && freeze(s1*2). "
    "G[2,inf] (s1 <= 0.8*(s1*1 + s1*2)/2)))"
)
V = (1, 1)


def _holds(f, row, env):
    """Truth of an atom or a Boolean combination of atoms at one sample"""
    if isinstance(f, Predicate):
        return bool(f.holds(row))
    if isinstance(f, Constraint):
        return bool(f.holds(row, env))
    if isinstance(f, And):
        return _holds(f.left, row, env) and _holds(f.right, row, env)
    if isinstance(f, Or):
        return _holds(f.left, row, env) or _holds(f.right, row, env)
    raise AssertionError(f"unexpected node {f}")


def _rho(f, row, env):
    if isinstance(f, Predicate):
        return float(f.robustness(row))
    if isinstance(f, Constraint):
        return float(f.robustness(row, env))
    if isinstance(f, And):
        return min(_rho(f.left, row, env), _rho(f.right, row, env))
    return max(_rho(f.left, row, env), _rho(f.right, row, env))


class TestExpressions:
    def test_evaluate_over_matrix(self):
        samples = np.array([[1.0, 2.0], [3.0, 4.0]])
        expr = BinOp("-", BinOp("*", Const(2.0), Signal(2)), Frozen(V))
        assert np.allclose(expr.evaluate(samples, {V: 1.0}), [3.0, 7.0])

    def test_unbound_frozen(self):
        with pytest.raises(UnboundFreezeVariable):
            Frozen(V).evaluate(None, {})

    def test_bounds(self):
        signals = {1: (-2.0, 3.0)}
        frozen = {V: (1.0, 2.0)}
        assert Call("abs", (Signal(1),)).bounds(signals, frozen) == (0.0, 3.0)
        assert BinOp("-", Signal(1), Frozen(V)).bounds(signals, frozen) == (-4.0, 2.0)
        assert BinOp("*", Signal(1), Frozen(V)).bounds(signals, frozen) == (-4.0, 6.0)
        assert BinOp("/", Frozen(V), Signal(1)).bounds(signals, frozen) == (-math.inf, math.inf)
        assert Neg(Frozen(V)).bounds(signals, frozen) == (-2.0, -1.0)

    def test_str(self):
        expr = BinOp("-", Signal(1), BinOp("-", Frozen(V), Const(2.0)))
        assert str(expr) == "s1 - (s1*1 - 2)"


class TestCompare:
    def test_predicate(self):
        assert compare(Signal(1), Comparison.GE, Const(2.0)) == Predicate(Signal(1), Comparison.GE, 2.0)

    def test_signal_difference_predicate(self):
        atom = compare(Signal(1), Comparison.LT, Signal(2))
        assert atom == Predicate(BinOp("-", Signal(1), Signal(2)), Comparison.LT, 0.0)

    def test_separable_constraint(self):
        atom = compare(Signal(1), Comparison.LE, BinOp("+", Frozen(V), Const(1.0)))
        assert atom == Constraint(Signal(1), Comparison.LE, BinOp("+", Frozen(V), Const(1.0)))
        assert atom.threshold({V: 2.0}) == 3.0

    def test_additive_split(self):
        atom = compare(BinOp("-", Signal(1), Frozen(V)), Comparison.LE, Const(0.5))
        assert atom == Constraint(Signal(1), Comparison.LE, BinOp("+", Frozen(V), Const(0.5)))

    def test_non_separable(self):
        atom = compare(BinOp("*", Signal(1), Frozen(V)), Comparison.LE, Const(1.0))
        assert isinstance(atom, Constraint)
        assert not atom.separable

    @pytest.mark.parametrize("fn", ["abs", "min", "max"])
    @pytest.mark.parametrize("op", list(Comparison))
    def test_mixed_calls_keep_truth_and_robustness(self, fn, op):
        diff = BinOp("-", Frozen(V), Signal(1))
        call = Call("abs", (diff,)) if fn == "abs" else Call(fn, (Signal(1), Frozen(V)))
        atom = compare(call, op, Const(0.5))
        assert not any(isinstance(node, Constraint) and not node.separable for node in atoms(atom))
        rng = np.random.default_rng(11)
        for _ in range(50):
            row = rng.normal(size=1)
            env = {V: float(rng.normal())}
            value = float(call.evaluate(row, env))
            assert _holds(atom, row, env) == bool(op.holds(value, 0.5))
            expected = value - 0.5 if op.is_upper else 0.5 - value
            assert _rho(atom, row, env) == pytest.approx(expected)


class TestBindings:
    def test_unbound(self):
        with pytest.raises(UnboundFreezeVariable):
            check_bindings(Eventually(Constraint(Signal(1), Comparison.LE, Frozen(V))))

    def test_bound_elsewhere_is_unbound(self):
        f = And(
            Freeze(V, Predicate(Signal(1), Comparison.GT, 0.0)),
            Constraint(Signal(1), Comparison.LE, Frozen(V)),
        )
        with pytest.raises(UnboundFreezeVariable):
            check_bindings(f)

    def test_duplicate(self):
        inner = Constraint(Signal(1), Comparison.LE, Frozen(V))
        with pytest.raises(DuplicateFreezeBinding):
            check_bindings(Freeze(V, Eventually(Freeze(V, inner))))

    def test_invalid_interval(self):
        with pytest.raises(FormulaError):
            Interval(3.0, 1.0)
        with pytest.raises(FormulaError):
            Interval(-1.0, 2.0)

    def test_max_dimension(self):
        assert max_dimension(parse(WORKED)) == 3
        assert max_dimension(parse("freeze(s4*1). s1 <= s4*1")) == 4


class TestSyntaxTree:
    def test_pre_order_indices(self):
        tree = build_syntax_tree(parse(WORKED))
        kinds = [tree.node(i).kind for i in tree.indices]
        assert kinds == [
            NodeKind.EVENTUALLY,
            NodeKind.AND,
            NodeKind.PREDICATE,
            NodeKind.FREEZE,
            NodeKind.EVENTUALLY,
            NodeKind.AND,
            NodeKind.PREDICATE,
            NodeKind.FREEZE,
            NodeKind.ALWAYS,
            NodeKind.CONSTRAINT,
        ]
        assert tree.children[1] == (2,)
        assert tree.children[2] == (3, 4)
        assert tree.children[10] == ()

    def test_subtrees(self):
        tree = build_syntax_tree(parse(WORKED))
        outer, inner = (1, 1), (1, 2)
        assert tree.freeze_order == (outer, inner)
        assert tree.top_variables == (outer,)
        assert tree.top == (1, 2, 3, 4)
        assert tree.subtrees[outer].nodes == (5, 6, 7, 8)
        assert tree.subtrees[outer].root == 5
        assert tree.subtrees[outer].parent == 4
        assert tree.subtrees[outer].children == (inner,)
        assert tree.subtrees[inner].nodes == (9, 10)
        assert tree.subtrees[inner].enclosing == outer
        assert tree.subtrees[inner].depth == 2
        assert tree.max_depth == 2

    def test_sibling_freezes(self):
        f = parse("F freeze(s1*1). s1 <= s1*1 && G freeze(s1*2). s1 >= s1*2")
        tree = build_syntax_tree(f)
        assert set(tree.top_variables) == {(1, 1), (1, 2)}


class TestNegationNormalForm:
    def test_push_through_boolean_and_temporal(self):
        p = Predicate(Signal(1), Comparison.GE, 1.0)
        q = Predicate(Signal(2), Comparison.LT, 0.0)
        f = Not(And(Always(p, Interval(0, 3)), Eventually(q)))
        g = negation_normal_form(f)
        assert g == Or(
            Eventually(Predicate(Signal(1), Comparison.LT, 1.0), Interval(0, 3)),
            Always(Predicate(Signal(2), Comparison.GE, 0.0)),
        )
        assert is_negation_free(g)

    def test_negated_until_from_zero(self):
        p = Predicate(Signal(1), Comparison.GE, 1.0)
        q = Predicate(Signal(2), Comparison.GE, 1.0)
        window = Interval(0, 4)
        not_p = Predicate(Signal(1), Comparison.LT, 1.0)
        not_q = Predicate(Signal(2), Comparison.LT, 1.0)
        assert negation_normal_form(Not(Until(p, q, window))) == Or(
            Always(not_q, window), Until(not_q, And(not_p, not_q), window)
        )

    def test_negated_until_with_delay_becomes_release(self):
        p = Predicate(Signal(1), Comparison.GE, 1.0)
        q = Predicate(Signal(2), Comparison.GE, 1.0)
        g = negation_normal_form(Not(Until(p, q, Interval(1, 4))))
        assert isinstance(g, Release)
        assert g.left == Predicate(Signal(1), Comparison.LT, 1.0)

    def test_negated_until_copies_get_fresh_freeze_tags(self):
        f = parse("!(s1 >= 0 U[0,3] freeze(s1*1). F s1 >= s1*1 + 1)")
        g = negation_normal_form(f)
        assert sorted(freeze_variables(g)) == [(1, 1), (1, 2), (1, 3)]
        check_bindings(g)
        tree = build_syntax_tree(g)
        assert sorted(tree.top_variables) == [(1, 1), (1, 2), (1, 3)]

    def test_fresh_tags_skip_variables_already_in_use(self):
        f = parse("F freeze(s1*2). !(s1 >= s1*2 U freeze(s1*1). G s1 <= s1*1)")
        g = negation_normal_form(f)
        assert sorted(freeze_variables(g)) == [(1, 1), (1, 2), (1, 3), (1, 4)]
        check_bindings(g)

    def test_freeze_and_constraints(self):
        f = parse("!freeze(s1*1). F (s1 <= s1*1)")
        g = negation_normal_form(f)
        assert g == Freeze(V, Always(Constraint(Signal(1), Comparison.GT, Frozen(V))))

    def test_double_negation(self):
        p = Predicate(Signal(1), Comparison.GE, 1.0)
        assert negation_normal_form(Not(Not(p))) == p


class TestThresholdTransform:
    def test_shifts_every_atom(self):
        f = parse("freeze(s1*1). (s1 >= 2 U s1 <= s1*1)")
        g = threshold_transform(f, 1.5)
        shifted = atoms(g)
        assert shifted[0] == Predicate(Signal(1), Comparison.GE, 3.5)
        assert shifted[1].threshold({V: 4.0}) == 2.5

    def test_zero_is_identity(self):
        f = parse("s1 >= 2")
        assert threshold_transform(f, 0.0) is f

    def test_rejects_negation(self):
        with pytest.raises(FormulaError):
            threshold_transform(parse("!(s1 >= 2)"), 1.0)

    @pytest.mark.parametrize("op", list(Comparison))
    def test_holds_iff_robustness_reaches_threshold(self, op):
        atom = compare(Signal(1), op, Frozen(V))
        rng = np.random.default_rng(5)
        for _ in range(100):
            row = rng.integers(-5, 5, size=1).astype(float)
            env = {V: float(rng.integers(-5, 5))}
            r = float(rng.integers(-4, 4)) + 0.5
            assert bool(threshold_transform(atom, r).holds(row, env)) == bool(atom.robustness(row, env) >= r)


def test_walk_is_pre_order():
    f = parse("(s1 > 0 && s2 > 0) || s3 > 0")
    assert [node.kind for node in walk(f)] == [
        NodeKind.OR,
        NodeKind.AND,
        NodeKind.PREDICATE,
        NodeKind.PREDICATE,
        NodeKind.PREDICATE,
    ]
