"""Data models for monitoring runs"""
from pydantic import BaseModel, Field
from typing import Optional, Dict, List
from enum import Enum


class Comparison(str, Enum):
    """Comparison operators allowed in atomic formulas"""
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @property
    def is_upper(self) -> bool:
        """True for > and >=, whose robustness is lhs - rhs"""
        return self in (Comparison.GT, Comparison.GE)

    @property
    def negated(self) -> "Comparison":
        return _NEGATED[self]

    @property
    def mirrored(self) -> "Comparison":
        """Operator obtained by swapping the two sides"""
        return _MIRRORED[self]

    def holds(self, left, right):
        if self is Comparison.LT:
            return left < right
        if self is Comparison.LE:
            return left <= right
        if self is Comparison.GT:
            return left > right
        return left >= right


_NEGATED = {
    Comparison.LT: Comparison.GE,
    Comparison.LE: Comparison.GT,
    Comparison.GT: Comparison.LE,
    Comparison.GE: Comparison.LT,
}

_MIRRORED = {
    Comparison.LT: Comparison.GT,
    Comparison.LE: Comparison.GE,
    Comparison.GT: Comparison.LT,
    Comparison.GE: Comparison.LE,
}


class NodeKind(str, Enum):
    """Syntax tree node kinds"""
    PREDICATE = "SignalPredicate"
    CONSTRAINT = "SignalConstraint"
    NOT = "Not"
    AND = "And"
    OR = "Or"
    ALWAYS = "Always"
    EVENTUALLY = "Eventually"
    UNTIL = "Until"
    RELEASE = "Release"
    FREEZE = "Freeze"


class MonitorMode(str, Enum):
    """Which engine answers a query"""
    INTERVAL = "interval"
    BASELINE = "baseline"
    ORACLE = "oracle"


class TraceKind(str, Enum):
    """Synthetic trace shapes"""
    PULSE = "pulse"
    DRIFTING_PULSE = "drifting_pulse"
    STABILIZE = "stabilize"
    STAIRS = "stairs"
    CROSSING = "crossing"


class MonitorStats(BaseModel):
    """Counters collected during one Boolean monitor run"""
    subupdates: int = 0
    iterations: Dict[str, int] = Field(default_factory=dict)  # per freeze variable
    instantiations: int = 0  # iterations of the innermost freeze level
    outer_iterations: int = 0
    max_intervals: Dict[int, int] = Field(default_factory=dict)  # node index -> max |intvl|
    early_stopped: bool = False

    @property
    def max_interval_count(self) -> int:
        return max(self.max_intervals.values(), default=0)


class RobustnessStep(BaseModel):
    """One binary-search step"""
    r: float
    verdict: bool


class RobustnessEstimate(BaseModel):
    """Robustness value with its conservative range"""
    estimate: float
    lo: float
    hi: float
    initial_lo: float
    initial_hi: float
    epsilon: float
    n_calls: int = 0
    mode: MonitorMode = MonitorMode.INTERVAL
    steps: List[RobustnessStep] = Field(default_factory=list)

    @property
    def initial_width(self) -> float:
        return self.initial_hi - self.initial_lo

    @property
    def width(self) -> float:
        return self.hi - self.lo


class RunReport(BaseModel):
    """Everything needed to reproduce and compare a run"""
    command: str
    mode: MonitorMode
    formula: str
    formula_digest: str
    trace_digest: str
    trace_length: int
    early_stop: bool = False
    verdict: Optional[bool] = None
    robustness: Optional[RobustnessEstimate] = None
    stats: Optional[MonitorStats] = None
    wall_time: float = 0.0

    def to_lines(self) -> List[str]:
        """Flat key=value rendering"""
        lines = [
            f"command={self.command}",
            f"mode={self.mode.value}",
            f"formula_digest={self.formula_digest}",
            f"trace_digest={self.trace_digest}",
            f"trace_length={self.trace_length}",
            f"early_stop={str(self.early_stop).lower()}",
        ]
        if self.verdict is not None:
            lines.append(f"verdict={'satisfied' if self.verdict else 'violated'}")
        if self.robustness is not None:
            rob = self.robustness
            lines += [
                f"estimate={rob.estimate}",
                f"range_lo={rob.lo}",
                f"range_hi={rob.hi}",
                f"initial_range_width={rob.initial_width}",
                f"n_calls={rob.n_calls}",
            ]
        if self.stats is not None:
            lines += [
                f"subupdates={self.stats.subupdates}",
                f"instantiations={self.stats.instantiations}",
                f"outer_iterations={self.stats.outer_iterations}",
                f"max_intervals={self.stats.max_interval_count}",
                f"early_stopped={str(self.stats.early_stopped).lower()}",
            ]
        lines.append(f"wall_time={self.wall_time:.6f}")
        return lines


class BenchRow(BaseModel):
    """One benchmark measurement"""
    formula: str
    size: int
    mode: MonitorMode
    trace: str  # satisfying / violating
    nonuniform: bool = False
    seconds: float
    verdict: bool
    max_intervals: int = 0
    instantiations: int = 0


class RobustnessBenchRow(BaseModel):
    """One robustness benchmark measurement against the exact value"""
    formula: str
    size: int
    trace: str
    nonuniform: bool = False
    epsilon: float
    seconds: float
    estimate: float
    exact: float
    n_calls: int
    initial_range_width: float
    relative_error: Optional[float] = None  # None when the exact value is infinite
