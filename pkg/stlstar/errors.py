"""Exceptions raised by the toolkit"""
from typing import Optional


class STLStarError(Exception):
    """Base class for every error the toolkit raises on bad input"""


class FormulaSyntaxError(STLStarError):
    """Formula text does not match the grammar"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class FormulaError(STLStarError):
    """Formula is syntactically fine but not acceptable where it is used"""


class UnboundFreezeVariable(FormulaError):
    """A constraint references a frozen value that no enclosing freeze binds"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound freeze variable: {name}")


class DuplicateFreezeBinding(FormulaError):
    """The same freeze variable is bound twice"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"freeze variable bound more than once: {name}")


class TraceError(STLStarError):
    """Trace data is malformed"""


class TraceIndexError(TraceError, IndexError):
    """Position index outside the trace"""


class DimensionMismatch(STLStarError):
    """Formula references a signal dimension the trace does not have"""


class GeneratorError(STLStarError):
    """Invalid trace generator request"""
