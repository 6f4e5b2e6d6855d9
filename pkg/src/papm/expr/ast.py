"""Expression tree nodes for chart component functions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "tanh")
CONSTANTS = ("pi", "e")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str  # one of CONSTANTS


@dataclass(frozen=True)
class Var:
    name: str
    index: int  # position in the chart's coordinate list


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*', '/'
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: float  # literal only


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expression"


Expression = Union[Num, Const, Var, Neg, BinOp, Pow, Call]


def to_text(e: Expression) -> str:
    """Fully parenthesized rendering; re-parsing it yields an equal tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_text(e.operand)})"
    if isinstance(e, BinOp):
        return f"({to_text(e.left)} {e.op} {to_text(e.right)})"
    if isinstance(e, Pow):
        exp = repr(float(e.exponent))
        if e.exponent < 0:
            exp = f"({exp})"
        return f"({to_text(e.base)}^{exp})"
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def free_variables(e: Expression) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Neg,)):
        return free_variables(e.operand)
    if isinstance(e, BinOp):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Pow):
        return free_variables(e.base)
    if isinstance(e, Call):
        return free_variables(e.arg)
    return set()
