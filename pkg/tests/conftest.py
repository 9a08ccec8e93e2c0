"""Shared fixtures"""
import numpy as np
import pytest

from stlstar.config import get_settings
from stlstar.trace import Trace

PI2_TIMES = [0, 1, 2, 4, 5, 7, 8, 10, 11, 13, 15, 17, 20, 25, 27, 30, 35, 40]
RUNNING_SIGNAL = [3, 5, 8, 10, 14, 12, 11, 6, 3, 1, 7]


@pytest.fixture(autouse=True)
def quiet_settings(monkeypatch):
    """No log file during tests; settings re-read per test"""
    monkeypatch.setenv("STLSTAR_LOG_FILE", "")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def pi1():
    """100 samples, one per second"""
    return Trace(np.arange(100.0), np.zeros(100))


@pytest.fixture
def pi2():
    """18 samples at irregular timestamps"""
    return Trace(PI2_TIMES, np.zeros(len(PI2_TIMES)))


@pytest.fixture
def running_trace():
    """s1 from the worked example; s2 flags e1 at sample 3, s3 flags e2 at sample 6"""
    n = len(RUNNING_SIGNAL)
    values = np.zeros((n, 3))
    values[:, 0] = RUNNING_SIGNAL
    values[3, 1] = 1.0
    values[6, 2] = 1.0
    return Trace(np.arange(float(n)), values)
