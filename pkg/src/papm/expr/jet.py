"""Second-order forward-mode jets: value, gradient and Hessian in one pass."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ast import BinOp, Call, Const, Expression, Neg, Num, Pow, Var

CONSTANT_VALUES = {"pi": math.pi, "e": math.e}


class DomainError(ArithmeticError):
    def __init__(self, function: str, value: float):
        self.function = function
        self.value = value
        super().__init__(f"{function} is undefined at {value!r}")


@dataclass(frozen=True, eq=False)
class Jet2:
    """Truncated Taylor data of a scalar field at a point.

    The Hessian is symmetrized on construction, so ``hessian[a, b]`` and
    ``hessian[b, a]`` are bitwise equal.
    """

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    def __post_init__(self):
        grad = np.array(self.gradient, dtype=float)
        hess = np.array(self.hessian, dtype=float)
        n = grad.shape[0]
        if grad.shape != (n,) or hess.shape != (n, n):
            raise ValueError(f"inconsistent jet shapes {grad.shape}, {hess.shape}")
        hess = 0.5 * (hess + hess.T)
        grad.flags.writeable = False
        hess.flags.writeable = False
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "gradient", grad)
        object.__setattr__(self, "hessian", hess)

    @property
    def dim(self) -> int:
        return self.gradient.shape[0]

    @classmethod
    def constant(cls, value: float, n: int) -> "Jet2":
        return cls(value, np.zeros(n), np.zeros((n, n)))

    @classmethod
    def variable(cls, value: float, index: int, n: int) -> "Jet2":
        grad = np.zeros(n)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((n, n)))

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.gradient + other.gradient, self.hessian + other.hessian)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.gradient - other.gradient, self.hessian - other.hessian)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __mul__(self, other: "Jet2") -> "Jet2":
        u, v = self, other
        cross = np.outer(u.gradient, v.gradient)
        return Jet2(
            u.value * v.value,
            u.value * v.gradient + v.value * u.gradient,
            u.value * v.hessian + v.value * u.hessian + cross + cross.T,
        )

    def __truediv__(self, other: "Jet2") -> "Jet2":
        if other.value == 0.0:
            raise DomainError("division", other.value)
        return self * other.chain("reciprocal", *_reciprocal(other.value))

    def chain(self, name: str, f0: float, f1: float, f2: float) -> "Jet2":
        """Compose a scalar function with value f0, derivative f1, second derivative f2."""
        with np.errstate(over="ignore", invalid="ignore"):
            out = Jet2(
                f0,
                f1 * self.gradient,
                f2 * np.outer(self.gradient, self.gradient) + f1 * self.hessian,
            )
        if not out.is_finite():
            raise OverflowError(f"{name} produced a non-finite jet at {self.value!r}")
        return out

    def is_finite(self) -> bool:
        return bool(
            math.isfinite(self.value) and np.all(np.isfinite(self.gradient)) and np.all(np.isfinite(self.hessian))
        )


def _reciprocal(x: float) -> tuple[float, float, float]:
    # powers of r rather than of x: x**2 underflows to 0 for tiny x, r*r just overflows to inf
    try:
        r = 1.0 / x
    except (ZeroDivisionError, OverflowError):
        raise OverflowError(f"reciprocal of {x!r}") from None
    return r, -r * r, 2.0 * r * r * r


def _power(x: float, p: float) -> tuple[float, float, float]:
    if p == 0.0:
        return 1.0, 0.0, 0.0
    if p == 1.0:
        return x, 1.0, 0.0
    if p == 2.0:
        return x * x, 2.0 * x, 2.0
    if x < 0.0 and not float(p).is_integer():
        raise DomainError(f"^{p!r}", x)
    if x == 0.0 and p < 0.0:
        raise DomainError(f"^{p!r}", x)
    try:
        return x**p, p * x ** (p - 1.0), p * (p - 1.0) * x ** (p - 2.0)
    except (ZeroDivisionError, OverflowError):
        # negative powers of a value that underflows or overflows
        raise OverflowError(f"^{p!r} is not representable at {x!r}") from None


def _function(name: str, x: float) -> tuple[float, float, float]:
    if name == "sin":
        s, c = math.sin(x), math.cos(x)
        return s, c, -s
    if name == "cos":
        s, c = math.sin(x), math.cos(x)
        return c, -s, -c
    if name == "tan":
        c = math.cos(x)
        if c == 0.0:
            raise DomainError("tan", x)
        t = math.tan(x)
        sec2 = 1.0 + t * t
        return t, sec2, 2.0 * t * sec2
    if name == "exp":
        try:
            v = math.exp(x)
        except OverflowError:
            raise OverflowError(f"exp overflow at {x!r}") from None
        return v, v, v
    if name == "ln":
        if x <= 0.0:
            raise DomainError("ln", x)
        r = 1.0 / x
        return math.log(x), r, -r * r
    if name == "sqrt":
        if x < 0.0:
            raise DomainError("sqrt", x)
        if x == 0.0:
            raise OverflowError("sqrt has unbounded derivative at 0")
        r = math.sqrt(x)
        d = 0.5 / r
        return r, d, -0.5 * d / x
    if name == "tanh":
        t = math.tanh(x)
        d = 1.0 - t * t
        return t, d, -2.0 * t * d
    raise ValueError(f"unknown function {name!r}")


def evaluate_jet2(e: Expression, point: Sequence[float]) -> Jet2:
    """Value, exact gradient and exact Hessian of ``e`` at ``point``."""
    point = [float(v) for v in point]
    n = len(point)

    def walk(node: Expression) -> Jet2:
        if isinstance(node, Num):
            return Jet2.constant(node.value, n)
        if isinstance(node, Const):
            return Jet2.constant(CONSTANT_VALUES[node.name], n)
        if isinstance(node, Var):
            if node.index >= n:
                raise ValueError(f"point has {n} coordinates; {node.name} needs index {node.index}")
            return Jet2.variable(point[node.index], node.index, n)
        if isinstance(node, Neg):
            return -walk(node.operand)
        if isinstance(node, BinOp):
            a, b = walk(node.left), walk(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            return a / b
        if isinstance(node, Pow):
            u = walk(node.base)
            return u.chain(f"^{node.exponent!r}", *_power(u.value, node.exponent))
        if isinstance(node, Call):
            u = walk(node.arg)
            return u.chain(node.func, *_function(node.func, u.value))
        raise TypeError(f"not an expression node: {node!r}")

    with np.errstate(over="ignore", invalid="ignore"):
        out = walk(e)
    if not out.is_finite():
        raise OverflowError("expression value or derivatives overflow at this point")
    return out


def evaluate(e: Expression, point: Sequence[float]) -> float:
    """Plain floating-point evaluation, sharing no arithmetic with the jet path."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Const):
        return CONSTANT_VALUES[e.name]
    if isinstance(e, Var):
        return float(point[e.index])
    if isinstance(e, Neg):
        return -evaluate(e.operand, point)
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, point), evaluate(e.right, point)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0.0:
            raise DomainError("division", b)
        return a / b
    if isinstance(e, Pow):
        x = evaluate(e.base, point)
        if not float(e.exponent).is_integer() and x < 0.0:
            raise DomainError(f"^{e.exponent!r}", x)
        if x == 0.0 and e.exponent < 0.0:
            raise DomainError(f"^{e.exponent!r}", x)
        return x**e.exponent
    if isinstance(e, Call):
        x = evaluate(e.arg, point)
        if e.func == "ln":
            if x <= 0.0:
                raise DomainError("ln", x)
            return math.log(x)
        if e.func == "sqrt":
            if x < 0.0:
                raise DomainError("sqrt", x)
            return math.sqrt(x)
        if e.func == "exp":
            try:
                return math.exp(x)
            except OverflowError:
                raise OverflowError(f"exp overflow at {x!r}") from None
        return {"sin": math.sin, "cos": math.cos, "tan": math.tan, "tanh": math.tanh}[e.func](x)
    raise TypeError(f"not an expression node: {e!r}")
