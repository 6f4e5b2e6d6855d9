"""Central finite-difference jets, used as an independent oracle for the AD path."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .ast import Expression
from .jet import Jet2, evaluate

GRADIENT_STEP = 1e-6
HESSIAN_STEP = 1e-4


def finite_difference_jet2(
    e: Expression,
    point: Sequence[float],
    step: float | None = None,
    *,
    grad_step: float = GRADIENT_STEP,
    hess_step: float = HESSIAN_STEP,
) -> Jet2:
    """Jet of ``e`` at ``point`` from central differences of plain evaluations.

    ``step`` overrides both ``grad_step`` and ``hess_step``. Off-diagonal
    Hessian entries use the 4-point stencil
    (f(++) - f(+-) - f(-+) + f(--)) / 4h^2.
    """
    if step is not None:
        grad_step = hess_step = step
    if grad_step <= 0 or hess_step <= 0:
        raise ValueError("finite-difference steps must be positive")
    x = np.asarray(point, dtype=float)
    n = x.shape[0]

    def f(dx: np.ndarray) -> float:
        return evaluate(e, x + dx)

    f0 = evaluate(e, x)
    grad = np.empty(n)
    hess = np.empty((n, n))
    eye = np.eye(n)
    for a in range(n):
        h = grad_step * eye[a]
        grad[a] = (f(h) - f(-h)) / (2 * grad_step)
        h = hess_step * eye[a]
        hess[a, a] = (f(h) - 2 * f0 + f(-h)) / hess_step**2
        for b in range(a + 1, n):
            k = hess_step * eye[b]
            hess[a, b] = hess[b, a] = (f(h + k) - f(h - k) - f(k - h) + f(-h - k)) / (
                4 * hess_step**2
            )
    return Jet2(f0, grad, hess)
