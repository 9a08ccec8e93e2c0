"""Formula grammar and parser"""
import math
from pathlib import Path
from typing import Union

from lark import Lark, Transformer, v_args, exceptions
from loguru import logger

from stlstar.errors import FormulaSyntaxError, STLStarError
from stlstar.formula import (
    And,
    Always,
    BinOp,
    Call,
    Const,
    Eventually,
    Formula,
    Freeze,
    FreezeVar,
    Frozen,
    Interval,
    Neg,
    Not,
    Or,
    Release,
    Signal,
    UNBOUNDED,
    Until,
    check_bindings,
    compare,
    membership,
)
from stlstar.models import Comparison

# Lowest to highest binding: ->, ||, &&, U/R (right associative), prefix operators.
# Tokens are matched longest first, so `s1*2` is the frozen variable (dimension 1,
# tag 2); write `s1 * 2` or `2*s1` for a product.
GRAMMAR = r"""
    ?start: implication

    ?implication: disjunction
        | disjunction "->" implication          -> implies

    ?disjunction: conjunction
        | disjunction "||" conjunction          -> lor

    ?conjunction: binary
        | conjunction "&&" binary               -> land

    ?binary: unary
        | unary "U" [interval] binary           -> until
        | unary "R" [interval] binary           -> release

    ?unary: "!" unary                           -> lnot
        | "G" [interval] unary                  -> always
        | "F" [interval] unary                  -> eventually
        | "freeze" "(" FROZEN ")" "." unary     -> freeze
        | "(" implication ")"
        | expr COMPARATOR expr                  -> comparison
        | expr "in" "[" expr "," expr "]"       -> member

    interval: "[" bound "," bound "]"
    bound: NUMBER | INF

    ?expr: term
        | expr "+" term                         -> add
        | expr "-" term                         -> sub

    ?term: factor
        | term "*" factor                       -> mul
        | term "/" factor                       -> div

    ?factor: "-" factor                         -> neg
        | NUMBER                                -> number
        | SIGNAL                                -> signal
        | FROZEN                                -> frozen
        | "abs" "(" expr ")"                    -> abs_
        | "min" "(" expr "," expr ")"           -> min_
        | "max" "(" expr "," expr ")"           -> max_
        | "(" expr ")"

    COMPARATOR: "<=" | ">=" | "<" | ">"
    INF: "inf"
    FROZEN: /s[0-9]*\*[0-9]*/
    SIGNAL: /s[0-9]*/
    NUMBER: /([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?/

    %import common.WS
    %ignore WS
"""

_parser = Lark(GRAMMAR, parser="earley", lexer="basic", maybe_placeholders=True)


def _dimension(text: str) -> int:
    dim = int(text) if text else 1
    if dim < 1:
        raise FormulaSyntaxError(f"signal dimensions start at 1, got s{text}")
    return dim


def frozen_variable(token: str) -> FreezeVar:
    """`sK*H` -> (K, H); a missing K means dimension 1 and a missing H means tag 1"""
    dim_text, tag_text = str(token)[1:].split("*", 1)
    tag = int(tag_text) if tag_text else 1
    if tag < 1:
        raise FormulaSyntaxError(f"occurrence tags start at 1, got {token}")
    return (_dimension(dim_text), tag)


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turns the parse tree into Formula nodes"""

    def implies(self, left, right):
        return Or(Not(left), right)

    def lor(self, left, right):
        return Or(left, right)

    def land(self, left, right):
        return And(left, right)

    def until(self, left, interval, right):
        return Until(left, right, interval or UNBOUNDED)

    def release(self, left, interval, right):
        return Release(left, right, interval or UNBOUNDED)

    def lnot(self, child):
        return Not(child)

    def always(self, interval, child):
        return Always(child, interval or UNBOUNDED)

    def eventually(self, interval, child):
        return Eventually(child, interval or UNBOUNDED)

    def freeze(self, token, child):
        return Freeze(frozen_variable(token), child)

    def comparison(self, left, op, right):
        return compare(left, Comparison(str(op)), right)

    def member(self, value, lo, hi):
        return membership(value, lo, hi)

    def interval(self, lo, hi):
        return Interval(lo, hi)

    def bound(self, token):
        return math.inf if str(token) == "inf" else float(token)

    def add(self, left, right):
        return BinOp("+", left, right)

    def sub(self, left, right):
        return BinOp("-", left, right)

    def mul(self, left, right):
        return BinOp("*", left, right)

    def div(self, left, right):
        return BinOp("/", left, right)

    def neg(self, arg):
        return Neg(arg)

    def number(self, token):
        return Const(float(token))

    def signal(self, token):
        return Signal(_dimension(str(token)[1:]))

    def frozen(self, token):
        return Frozen(frozen_variable(token))

    def abs_(self, arg):
        return Call("abs", (arg,))

    def min_(self, left, right):
        return Call("min", (left, right))

    def max_(self, left, right):
        return Call("max", (left, right))


def parse(text: str) -> Formula:
    """Parse formula text; raises FormulaSyntaxError, UnboundFreezeVariable or DuplicateFreezeBinding"""
    try:
        tree = _parser.parse(text)
        formula = FormulaBuilder().transform(tree)
    except exceptions.UnexpectedInput as e:
        line = getattr(e, "line", None)
        column = getattr(e, "column", None)
        if line is not None and line < 0:
            line, column = None, None
        raise FormulaSyntaxError("unexpected input in formula", line, column) from None
    except exceptions.VisitError as e:
        if isinstance(e.orig_exc, STLStarError):
            raise e.orig_exc from None
        raise
    if not isinstance(formula, Formula):
        raise FormulaSyntaxError("formula text is an expression, not a formula")
    check_bindings(formula)
    logger.debug(f"Parsed formula: {formula}")
    return formula


def parse_file(path: Union[str, Path]) -> Formula:
    return parse(Path(path).read_text(encoding="utf-8"))
