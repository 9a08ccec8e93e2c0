"""Interval and baseline Boolean monitors"""
import math

import numpy as np
import pytest

from stlstar.errors import DimensionMismatch
from stlstar.fixtures import fixture_formula
from stlstar.formula import build_syntax_tree
from stlstar.models import TraceKind
from stlstar.parser import parse
from stlstar.services.boolean_monitor import EarlyStop, baseline_monitor, boolean_monitor
from stlstar.services.oracle import oracle_sat
from stlstar.trace import Trace, generate
from tests.helpers import cases

WORKED = (
    "F (s2 >= 0.5 && freeze(s1*1). F (s3 >= 0.5 && freeze(s1*2). "
    "G[2,inf] (s1 <= 0.8*(s1*1 + s1*2)/2)))"
)
OUTER, INNER = (1, 1), (1, 2)


class TestWorkedExample:
    """Two events freeze s1; s1 must then settle below 80 % of their mean"""

    def test_verdict(self, running_trace):
        verdict, stats = boolean_monitor.monitor(parse(WORKED), running_trace)
        assert verdict is True
        assert oracle_sat(parse(WORKED), running_trace) is True
        assert baseline_monitor.monitor(parse(WORKED), running_trace)[0] is True

    def test_first_instantiations(self, running_trace):
        seen = []

        def observer(var, i, state):
            if var == INNER:
                seen.append(
                    (
                        state.env[OUTER],
                        i,
                        list(state.intervals[10]),
                        state.indexes[10].flip,
                        list(state.intervals[9]),
                        state.indexes[10].points.tolist(),
                    )
                )
            elif i == 0:
                seen.append(("outer", bool(state.points[8][0])))

        boolean_monitor.monitor(parse(WORKED), running_trace, observer=observer)
        # outer s1*1 = 3, inner s1*2 = 3: only s1 = 1 at sample 9 is <= 2.4
        assert seen[0][:5] == (3.0, 0, [(9, 9)], 1, [(9, 10)])
        assert seen[0][5] == [False] * 9 + [True, False]
        # inner s1*2 = 5: threshold 3.2, samples 8 and 9 from sample 1 on
        assert seen[1][:4] == (3.0, 1, [(8, 9)], 3)
        assert seen[1][5][1:] == [False] * 7 + [True, True, False]
        assert ("outer", False) in seen

    def test_counters(self, running_trace):
        n = len(running_trace)
        _, stats = boolean_monitor.monitor(parse(WORKED), running_trace)
        assert stats.iterations["s1*1"] == n
        assert stats.iterations["s1*2"] == n * (n + 1) // 2
        assert stats.instantiations == n * (n + 1) // 2
        assert stats.outer_iterations == n
        assert stats.max_interval_count >= 1
        assert not stats.early_stopped

    def test_accepts_syntax_tree(self, running_trace):
        tree = build_syntax_tree(parse(WORKED))
        assert boolean_monitor.monitor(tree, running_trace)[0] is True


class TestInstantiationCount:
    @pytest.mark.parametrize("n", [5, 10, 20])
    def test_two_levels(self, n):
        trace = Trace(np.arange(float(n)), np.linspace(0.0, 3.0, n))
        f = parse("F freeze(s1*1). F freeze(s1*2). (s1 <= s1*1 + s1*2)")
        _, stats = boolean_monitor.monitor(f, trace)
        assert stats.instantiations == n * (n + 1) // 2

    @pytest.mark.parametrize("n", [5, 10, 20])
    def test_three_levels(self, n):
        trace = Trace(np.arange(float(n)), np.linspace(0.0, 3.0, n))
        f = parse("F freeze(s1*1). F freeze(s1*2). F freeze(s1*3). (s1 <= s1*1 + s1*2 - s1*3)")
        _, stats = boolean_monitor.monitor(f, trace)
        assert stats.instantiations == math.comb(n + 2, 3)
        assert stats.iterations["s1*1"] == n


class TestSubupdates:
    @pytest.mark.parametrize("n", [50, 200])
    def test_decreasing_threshold_moves_one_cell_per_instantiation(self, n):
        trace = Trace(np.arange(float(n)), np.arange(float(n), 0.0, -1.0))
        _, stats = boolean_monitor.monitor(parse("G freeze(s1*1). F (s1 >= s1*1)"), trace)
        assert stats.instantiations == n
        assert stats.subupdates == n - 1


class TestEarlyStop:
    def test_plan_shapes(self):
        assert EarlyStop.plan(build_syntax_tree(parse(WORKED))) is not None
        assert EarlyStop.plan(build_syntax_tree(fixture_formula("phi3"))) is not None
        # two freeze operators on separate branches below the root
        f = parse("G (freeze(s1*1). s1 <= s1*1 && freeze(s1*2). s1 >= s1*2)")
        assert EarlyStop.plan(build_syntax_tree(f)) is None
        # root is not G/F
        assert EarlyStop.plan(build_syntax_tree(parse("freeze(s1*1). G s1 <= s1*1"))) is None

    def test_eventually_root_stops_at_first_witness(self):
        trace = generate(TraceKind.STABILIZE, 100)
        verdict, stats = boolean_monitor.monitor(fixture_formula("phi1"), trace, early_stop=True)
        assert verdict is True
        assert stats.early_stopped
        assert stats.outer_iterations < 100

    def test_always_root_stops_at_first_violation(self):
        trace = generate(TraceKind.PULSE, 100, violate=True)
        verdict, stats = boolean_monitor.monitor(fixture_formula("phi3"), trace, early_stop=True)
        assert verdict is False
        assert stats.outer_iterations == 1

    def test_same_verdict_as_full_run(self):
        for f, trace in cases(seed=3, count=60):
            if EarlyStop.plan(build_syntax_tree(f)) is None:
                continue
            full, _ = boolean_monitor.monitor(f, trace)
            assert boolean_monitor.monitor(f, trace, early_stop=True)[0] == full
            assert baseline_monitor.monitor(f, trace, early_stop=True)[0] == full


class TestAgainstOracle:
    """All three engines agree on random formulas and traces"""

    @pytest.mark.parametrize("seed", range(3))
    def test_random(self, seed):
        for f, trace in cases(seed=seed, count=20):
            expected = oracle_sat(f, trace)
            assert boolean_monitor.monitor(f, trace)[0] == expected, (str(f), trace.times.tolist())
            assert baseline_monitor.monitor(f, trace)[0] == expected, (str(f), trace.times.tolist())

    @pytest.mark.slow
    def test_random_sweep(self):
        for f, trace in cases(seed=1000, count=1000, max_length=25, depth=5, max_freeze=2):
            expected = oracle_sat(f, trace)
            assert boolean_monitor.monitor(f, trace)[0] == expected, (str(f), trace.times.tolist())
            assert baseline_monitor.monitor(f, trace)[0] == expected, (str(f), trace.times.tolist())

    def test_single_sample(self):
        trace = Trace([0.0], [[1.0]])
        for text in ["G[1,2] s1 < 0", "F[1,2] s1 > 0", "freeze(s1*1). s1 <= s1*1", "s1 > 0 U[1,inf] s1 > 0"]:
            f = parse(text)
            assert boolean_monitor.monitor(f, trace)[0] == oracle_sat(f, trace)


class TestInputs:
    def test_dimension_mismatch(self):
        trace = Trace(np.arange(3.0), np.zeros(3))
        with pytest.raises(DimensionMismatch):
            boolean_monitor.monitor(parse("s3 > 0"), trace)
        with pytest.raises(DimensionMismatch):
            baseline_monitor.monitor(parse("s3 > 0"), trace)
