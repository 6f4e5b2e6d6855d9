"""Recursive-descent parser for the chart expression language.

Grammar (EBNF)::

    expr     = term { ("+" | "-") term } ;
    term     = unary { ("*" | "/") unary } ;
    unary    = "-" unary | power ;
    power    = atom [ "^" exponent ] ;
    exponent = "-" exponent | power ;          (* must reduce to a numeric literal *)
    atom     = number | coord | const | func "(" expr ")" | "(" expr ")" ;
    func     = "sin" | "cos" | "tan" | "exp" | "ln" | "sqrt" | "tanh" ;
    const    = "pi" | "e" ;
    number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
             | "." digits [ exponent part ] ;

``^`` binds tighter than unary minus and is right-associative, so ``-x^2``
is ``-(x^2)``. Coordinate names shadow the constants ``pi`` and ``e``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .ast import CONSTANTS, FUNCTIONS, BinOp, Call, Const, Expression, Neg, Num, Pow, Var


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, position: int, expected: Sequence[str] = ()):
        self.position = position
        self.expected = tuple(expected)
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class UnknownIdentifier(ValueError):
    def __init__(self, name: str, position: int):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r} at position {position}")


class NonLiteralExponent(ValueError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(
            f"exponent at position {position} is not a numeric literal; "
            "write general powers as exp(b*ln(a))"
        )


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_ATOM_START = ("number", "identifier", "'('", "'-'")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num', 'ident', 'op', 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, _ATOM_START)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, coords: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.coords = {name: k for k, name in enumerate(coords)}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind not in ("op",):
            raise ExprSyntaxError(self._describe(self.tok), self.tok.pos, (f"'{text}'",))
        self._advance()

    @staticmethod
    def _describe(t: _Tok) -> str:
        return "unexpected end of input" if t.kind == "end" else f"unexpected token {t.text!r}"

    def parse(self) -> Expression:
        e = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(
                self._describe(self.tok), self.tok.pos, ("operator", "end of input")
            )
        return e

    def expr(self) -> Expression:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self._advance().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expression:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self._advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expression:
        if self.tok.kind == "op" and self.tok.text == "-":
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self._advance()
            pos = self.tok.pos
            exponent = self._exponent()
            value = _literal_value(exponent)
            if value is None:
                raise NonLiteralExponent(pos)
            return Pow(base, value)
        return base

    def _exponent(self) -> Expression:
        if self.tok.kind == "op" and self.tok.text == "-":
            self._advance()
            return Neg(self._exponent())
        return self.power()

    def atom(self) -> Expression:
        t = self.tok
        if t.kind == "num":
            self._advance()
            return Num(float(t.text))
        if t.kind == "ident":
            self._advance()
            if t.text in self.coords:
                return Var(t.text, self.coords[t.text])
            if t.text in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Call(t.text, arg)
            if t.text in CONSTANTS:
                return Const(t.text)
            raise UnknownIdentifier(t.text, t.pos)
        if t.kind == "op" and t.text == "(":
            self._advance()
            e = self.expr()
            self._expect(")")
            return e
        raise ExprSyntaxError(self._describe(t), t.pos, _ATOM_START)


def _literal_value(e: Expression) -> float | None:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Neg):
        inner = _literal_value(e.operand)
        return None if inner is None else -inner
    return None


def parse_expression(text: str, coords: Sequence[str]) -> Expression:
    """Parse ``text`` into an expression tree over the coordinate names ``coords``.

    Raises ExprSyntaxError, UnknownIdentifier or NonLiteralExponent.
    """
    if not coords:
        raise ValueError("at least one coordinate name is required")
    if len(set(coords)) != len(coords):
        raise ValueError(f"coordinate names must be distinct: {list(coords)}")
    for name in coords:
        if name in FUNCTIONS or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise ValueError(f"invalid coordinate name {name!r}")
    return _Parser(text, coords).parse()
