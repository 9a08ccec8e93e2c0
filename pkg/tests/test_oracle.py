"""Brute-force reference semantics"""
import math

import numpy as np
import pytest

from stlstar.errors import TraceError, TraceIndexError, UnboundFreezeVariable
from stlstar.formula import Constraint, Eventually, Frozen, Signal
from stlstar.models import Comparison
from stlstar.parser import parse
from stlstar.services.oracle import oracle_points, oracle_rho, oracle_sat
from stlstar.trace import Trace


@pytest.fixture
def ramp():
    """s1 = 0, 1, ..., 5 at irregular times"""
    return Trace([0.0, 1.0, 3.0, 4.0, 7.0, 8.0], np.arange(6.0))


class TestBoolean:
    def test_eventually_window(self, ramp):
        assert oracle_points(parse("F[2,3] s1 >= 3"), ramp).tolist() == [False, True, False, True, False, False]

    def test_always_vacuous_at_end(self, ramp):
        assert oracle_points(parse("G[1,1] s1 < 0"), ramp).tolist() == [False, True, False, True, False, True]

    def test_until_needs_left_before_witness(self, ramp):
        f = parse("s1 <= 1 U[0,3] s1 >= 2")
        assert oracle_points(f, ramp).tolist() == [True, True, True, True, True, True]
        g = parse("s1 <= 0 U[0,3] s1 >= 2")
        assert oracle_points(g, ramp).tolist() == [False, False, True, True, True, True]

    def test_release(self, ramp):
        f = parse("s1 >= 1 R[0,10] s1 <= 2")
        assert oracle_sat(f, ramp) is True
        assert oracle_sat(f, ramp, i=2) is True
        assert oracle_sat(f, ramp, i=3) is False

    def test_freeze_reads_current_sample(self, ramp):
        f = parse("freeze(s1*1). G[1,inf] s1 > s1*1")
        assert oracle_points(f, ramp).tolist() == [True] * 6
        g = parse("freeze(s1*1). F[1,inf] s1 <= s1*1")
        assert not any(oracle_points(g, ramp))

    def test_environment_argument(self, ramp):
        f = Eventually(Constraint(Signal(1), Comparison.GE, Frozen((1, 1))))
        assert oracle_sat(f, ramp, env={(1, 1): 5.0}) is True
        assert oracle_sat(f, ramp, env={(1, 1): 5.5}) is False
        with pytest.raises(UnboundFreezeVariable):
            oracle_sat(f, ramp)


class TestRobustness:
    def test_predicate(self, ramp):
        assert oracle_rho(parse("s1 >= 2"), ramp, i=4) == 2.0
        assert oracle_rho(parse("s1 < 2"), ramp, i=4) == -2.0

    def test_temporal(self, ramp):
        assert oracle_rho(parse("F[0,3] s1 >= 2"), ramp) == 0.0
        assert oracle_rho(parse("G s1 >= 2"), ramp) == -2.0

    def test_until_and_release_over_timed_windows(self, ramp):
        # window [3,7] from time 0 covers samples 2, 3 and 4
        assert oracle_rho(parse("s1 >= 1 U[3,7] s1 >= 4"), ramp) == -1.0
        assert oracle_rho(parse("s1 <= 0 R[3,7] s1 <= 3"), ramp) == 0.0
        assert oracle_rho(parse("s1 >= 1 U[3,7] s1 >= 4"), ramp, i=1) == 0.0

    def test_empty_windows(self, ramp):
        assert oracle_rho(parse("F[20,30] s1 >= 2"), ramp) == -math.inf
        assert oracle_rho(parse("G[20,30] s1 >= 2"), ramp) == math.inf

    def test_freeze(self, ramp):
        # largest later increase over the frozen value from sample 0, i.e. 5 - 0
        assert oracle_rho(parse("freeze(s1*1). F[1,inf] s1 >= s1*1"), ramp) == 5.0

    def test_sign_matches_verdict(self, ramp):
        for text in ["F[0,3] s1 >= 2.5", "G[0,4] s1 <= 3.5", "s1 <= 2 U s1 >= 4", "freeze(s1*1). F s1 >= s1*1 + 4"]:
            f = parse(text)
            rho = oracle_rho(f, ramp)
            assert rho != 0
            assert (rho > 0) == oracle_sat(f, ramp)


class TestLimits:
    def test_position_outside_trace(self, ramp):
        with pytest.raises(TraceIndexError):
            oracle_sat(parse("s1 > 0"), ramp, i=6)
        with pytest.raises(IndexError):
            oracle_rho(parse("s1 > 0"), ramp, i=-1)

    def test_length_limit(self):
        trace = Trace(np.arange(40.0), np.zeros(40))
        with pytest.raises(TraceError):
            oracle_sat(parse("s1 > 0"), trace)
        assert oracle_sat(parse("s1 >= 0"), trace, limit=50) is True

    def test_length_limit_from_settings(self, monkeypatch):
        from stlstar.config import get_settings

        monkeypatch.setenv("STLSTAR_ORACLE_MAX_LENGTH", "50")
        get_settings.cache_clear()
        trace = Trace(np.arange(40.0), np.zeros(40))
        assert oracle_sat(parse("s1 >= 0"), trace) is True
