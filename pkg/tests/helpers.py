"""Random formulas and traces for cross-checking the engines"""
import math
import random
from typing import List

import numpy as np

from stlstar.formula import (
    Always,
    And,
    BinOp,
    Call,
    Const,
    Eventually,
    Formula,
    Freeze,
    FreezeVar,
    Frozen,
    Interval,
    Not,
    Or,
    Release,
    Signal,
    Until,
    compare,
)
from stlstar.models import Comparison
from stlstar.trace import Trace

LEVELS = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
OFFSETS = [-1.5, -0.5, 0.0, 0.5, 1.5]


def random_window(rng: random.Random) -> Interval:
    lo = rng.choice([0, 0, 1, 2])
    hi = rng.choice([lo, lo + 1, lo + 2, lo + 4, math.inf, math.inf])
    return Interval(float(lo), float(hi))


def random_atom(rng: random.Random, dims: int, bound: List[FreezeVar]) -> Formula:
    k = rng.randint(1, dims)
    op = rng.choice(list(Comparison))
    c = rng.choice(OFFSETS)
    roll = rng.random()
    if bound and roll < 0.15:
        var = rng.choice(bound)
        return compare(Call("abs", (BinOp("-", Frozen(var), Signal(k)),)), op, Const(abs(c)))
    if bound and roll < 0.6:
        var = rng.choice(bound)
        return compare(Signal(k), op, BinOp("+", Frozen(var), Const(c)))
    return compare(Signal(k), op, Const(c))


def random_formula(rng: random.Random, depth: int = 4, dims: int = 2, max_freeze: int = 2) -> Formula:
    """Formula with at most `max_freeze` freeze operators, every frozen value bound"""
    tags = [0]

    def build(d: int, bound: List[FreezeVar]) -> Formula:
        if d == 0 or rng.random() < 0.15:
            return random_atom(rng, dims, bound)
        kinds = ["not", "and", "or", "G", "F", "U", "R"]
        if tags[0] < max_freeze:
            kinds += ["freeze", "freeze"]
        kind = rng.choice(kinds)
        if kind == "not":
            return Not(build(d - 1, bound))
        if kind == "and":
            return And(build(d - 1, bound), build(d - 1, bound))
        if kind == "or":
            return Or(build(d - 1, bound), build(d - 1, bound))
        if kind == "G":
            return Always(build(d - 1, bound), random_window(rng))
        if kind == "F":
            return Eventually(build(d - 1, bound), random_window(rng))
        if kind == "U":
            return Until(build(d - 1, bound), build(d - 1, bound), random_window(rng))
        if kind == "R":
            return Release(build(d - 1, bound), build(d - 1, bound), random_window(rng))
        tags[0] += 1
        var = (rng.randint(1, dims), tags[0])
        return Freeze(var, build(d - 1, bound + [var]))

    return build(depth, [])


def random_trace(rng: random.Random, max_length: int = 12, dims: int = 2, uniform: bool = None) -> Trace:
    """Integer timestamps so window arithmetic is exact"""
    n = rng.randint(1, max_length)
    if uniform is None:
        uniform = rng.random() < 0.5
    if uniform:
        times = list(range(n))
    else:
        times = [0]
        for _ in range(n - 1):
            times.append(times[-1] + rng.choice([1, 1, 2, 3, 5]))
    values = np.array([[rng.choice(LEVELS) for _ in range(dims)] for _ in range(n)])
    return Trace(times, values)


def cases(seed: int, count: int, max_length: int = 12, depth: int = 4, max_freeze: int = 2):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_formula(rng, depth=depth, max_freeze=max_freeze), random_trace(rng, max_length)
