"""Experiment formulas and the trace shapes they are checked against"""
from typing import Callable, Dict, NamedTuple, Optional

from stlstar.config import get_settings
from stlstar.formula import Formula
from stlstar.models import TraceKind
from stlstar.parser import parse

EPSILON = 0.1  # tolerance around a frozen level
DELTA = 1.5  # minimum jump between levels


def _num(value: float) -> str:
    return f"{value:g}"


def _horizon(horizon: Optional[float]) -> float:
    return get_settings().generator_horizon if horizon is None else horizon


def phi1_text() -> str:
    """After e1 then e2, s1 stays within 20 % of the mean of the two frozen values, from 2 time units on"""
    mean = "(s1*1 + s1*2)/2"
    return (
        "F (s2 >= 0.5 && freeze(s1*1). F (s3 >= 0.5 && freeze(s1*2). "
        f"G[2,inf] (s1 in [0.8*{mean}, 1.2*{mean}])))"
    )


def phi2_text() -> str:
    return (
        "F (s1 > 5 && freeze(s2*1). F (s1 > 10 && freeze(s2*2). "
        "F ((s2 > s2*1 + s2*2) U (s1 < 5))))"
    )


def phi3_text(horizon: Optional[float] = None) -> str:
    """Rectangular pulse with unknown levels; checked where two later level changes fit in the horizon"""
    horizon = _horizon(horizon)
    last = horizon - 3 * horizon / 10
    e, d = _num(EPSILON), _num(DELTA)
    return (
        f"G[0,{_num(last)}] freeze(s1*1). ((abs(s1*1 - s1) <= {e}) U "
        f"(abs(s1*1 - s1) >= {d} && freeze(s1*2). ((abs(s1*2 - s1) <= {e}) U (abs(s1*1 - s1) <= {e}))))"
    )


def phi4_text(horizon: Optional[float] = None) -> str:
    """Repeating staircase of three levels"""
    horizon = _horizon(horizon)
    last = horizon - 4 * horizon / 10
    e, d = _num(EPSILON), _num(DELTA)
    return (
        f"G[0,{_num(last)}] freeze(s1*1). ((abs(s1*1 - s1) <= {e}) U "
        f"(abs(s1*1 - s1) >= {d} && freeze(s1*2). ((abs(s1*2 - s1) <= {e}) U "
        f"(abs(s1*2 - s1) >= {d} && freeze(s1*3). ((abs(s1*3 - s1) <= {e}) U (abs(s1*1 - s1) <= {e}))))))"
    )


def psi_text(horizon: Optional[float] = None) -> str:
    """Pulse whose levels are flat: reads the slope of s1 from s2 (see `with_slope`)"""
    horizon = _horizon(horizon)
    last = horizon - 3 * horizon / 10
    e, d = _num(EPSILON), _num(DELTA)
    return (
        f"G[0,{_num(last)}] freeze(s1*1). ((abs(s1*1 - s1) <= {e}) U "
        f"(abs(s1*1 - s1) >= {d} && ((abs(s2) <= {e}) U (abs(s1*1 - s1) <= {e}))))"
    )


class Fixture(NamedTuple):
    name: str
    build: Callable[..., str]
    kind: TraceKind
    slope: bool = False  # evaluate over with_slope(trace)
    scaled: bool = True  # outer window follows the generator horizon

    def text(self, horizon: Optional[float] = None) -> str:
        return self.build(horizon) if self.scaled else self.build()


FIXTURES: Dict[str, Fixture] = {
    "phi1": Fixture("phi1", phi1_text, TraceKind.STABILIZE, scaled=False),
    "phi2": Fixture("phi2", phi2_text, TraceKind.CROSSING, scaled=False),
    "phi3": Fixture("phi3", phi3_text, TraceKind.PULSE),
    "phi4": Fixture("phi4", phi4_text, TraceKind.STAIRS),
    "psi": Fixture("psi", psi_text, TraceKind.PULSE, slope=True),
}


def fixture_formula(name: str, horizon: Optional[float] = None) -> Formula:
    try:
        fixture = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture formula: {name} (choose from {', '.join(FIXTURES)})") from None
    return parse(fixture.text(horizon))
