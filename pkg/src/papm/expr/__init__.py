"""Chart expression language: parsing, exact second-order jets, FD oracle."""

from .ast import BinOp, Call, Const, Expression, Neg, Num, Pow, Var, free_variables, to_text
from .finite_diff import finite_difference_jet2
from .jet import DomainError, Jet2, evaluate, evaluate_jet2
from .parser import ExprSyntaxError, NonLiteralExponent, UnknownIdentifier, parse_expression

__all__ = [
    "BinOp",
    "Call",
    "Const",
    "DomainError",
    "ExprSyntaxError",
    "Expression",
    "Jet2",
    "Neg",
    "NonLiteralExponent",
    "Num",
    "Pow",
    "UnknownIdentifier",
    "Var",
    "evaluate",
    "evaluate_jet2",
    "finite_difference_jet2",
    "free_variables",
    "parse_expression",
    "to_text",
]
