"""Dense component tensors of rank <= 4 with metric-aware contraction.

Components are numpy arrays indexed in slot order, slot 0 varying slowest
(numpy's row-major layout). Every slot carries a variance flag: ``"d"`` for a
covariant (lower) index and ``"u"`` for a contravariant (upper) one. Geometric
tensors are stored fully covariant; raising happens only inside contractions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_RANK = 4


class TensorError(ValueError):
    pass


class NotPositiveDefinite(TensorError):
    def __init__(self, smallest: float):
        self.smallest = smallest
        super().__init__(f"matrix is not positive definite (smallest eigenvalue {smallest:.3e})")


class Asymmetric(TensorError):
    def __init__(self, deviation: float):
        self.deviation = deviation
        super().__init__(f"matrix is not symmetric (max |g - g^T| = {deviation:.3e})")


class SlotOutOfRange(TensorError):
    pass


class VarianceMismatch(TensorError):
    pass


class RankMismatch(TensorError):
    pass


@dataclass(frozen=True, eq=False)
class DenseTensor:
    components: np.ndarray
    variance: tuple[str, ...]

    def __post_init__(self):
        comps = np.array(self.components, dtype=float)
        variance = tuple(self.variance)
        if comps.ndim > MAX_RANK:
            raise RankMismatch(f"rank {comps.ndim} exceeds {MAX_RANK}")
        if len(variance) != comps.ndim:
            raise RankMismatch(f"{len(variance)} variance flags for rank {comps.ndim}")
        if comps.ndim and len(set(comps.shape)) != 1:
            raise TensorError(f"all slots must have the same dimension, got {comps.shape}")
        if any(v not in ("u", "d") for v in variance):
            raise TensorError(f"variance flags must be 'u' or 'd', got {variance}")
        comps.flags.writeable = False
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "variance", variance)

    @classmethod
    def covariant(cls, components) -> "DenseTensor":
        comps = np.asarray(components, dtype=float)
        return cls(comps, ("d",) * comps.ndim)

    @property
    def rank(self) -> int:
        return self.components.ndim

    @property
    def dim(self) -> int:
        return self.components.shape[0] if self.rank else 0

    def __getitem__(self, idx):
        return self.components[idx]

    def scalar(self) -> float:
        if self.rank:
            raise RankMismatch(f"rank-{self.rank} tensor is not a scalar")
        return float(self.components)


def invert_spd(g, tol: float = 1e-12) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix.

    Symmetry is checked to ``tol`` relative to the largest entry.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise TensorError(f"expected a square matrix, got shape {g.shape}")
    dev = float(np.max(np.abs(g - g.T))) if g.size else 0.0
    if dev > tol * (1.0 + float(np.max(np.abs(g)))):
        raise Asymmetric(dev)
    g = 0.5 * (g + g.T)
    smallest = float(np.linalg.eigvalsh(g)[0])
    if smallest <= 0.0:
        raise NotPositiveDefinite(smallest)
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(smallest) from None
    eye = np.eye(g.shape[0])
    lower_inv = np.linalg.solve(chol, eye)
    inv = lower_inv.T @ lower_inv
    return 0.5 * (inv + inv.T)


@dataclass(frozen=True, eq=False)
class MetricPair:
    g: np.ndarray
    g_inv: np.ndarray

    @classmethod
    def from_metric(cls, g) -> "MetricPair":
        g = np.asarray(g, dtype=float)
        g_inv = invert_spd(g)
        g = 0.5 * (g + g.T)
        for arr in (g, g_inv):
            arr.flags.writeable = False
        return cls(g, g_inv)

    @property
    def dim(self) -> int:
        return self.g.shape[0]


def _check_slot(t: DenseTensor, slot: int) -> None:
    if not 0 <= slot < t.rank:
        raise SlotOutOfRange(f"slot {slot} out of range for rank {t.rank}")


def contract(t: DenseTensor, slot_a: int, slot_b: int, weight: MetricPair | None = None) -> DenseTensor:
    """Trace over two slots.

    With ``weight`` both slots must be covariant and are contracted with the
    inverse metric; without it one slot must be contravariant and the other
    covariant (plain Kronecker trace).
    """
    _check_slot(t, slot_a)
    _check_slot(t, slot_b)
    if slot_a == slot_b:
        raise SlotOutOfRange("contraction slots must be distinct")
    va, vb = t.variance[slot_a], t.variance[slot_b]
    comps = t.components
    if weight is not None:
        if va != "d" or vb != "d":
            raise VarianceMismatch(f"metric contraction needs two covariant slots, got {va}{vb}")
        if weight.dim != t.dim:
            raise TensorError(f"metric dimension {weight.dim} does not match tensor {t.dim}")
        # move the pair to the front, weight it with g^{ab}, then sum
        moved = np.moveaxis(comps, (slot_a, slot_b), (0, 1))
        out = np.tensordot(weight.g_inv, moved, axes=([0, 1], [0, 1]))
    else:
        if {va, vb} != {"u", "d"}:
            raise VarianceMismatch(f"plain trace needs one upper and one lower slot, got {va}{vb}")
        out = np.trace(comps, axis1=slot_a, axis2=slot_b)
    variance = tuple(v for k, v in enumerate(t.variance) if k not in (slot_a, slot_b))
    return DenseTensor(out, variance)


def raise_index(t: DenseTensor, slot: int, metric: MetricPair) -> DenseTensor:
    _check_slot(t, slot)
    if t.variance[slot] != "d":
        raise VarianceMismatch(f"slot {slot} is already contravariant")
    out = np.moveaxis(np.tensordot(metric.g_inv, t.components, axes=([1], [slot])), 0, slot)
    variance = t.variance[:slot] + ("u",) + t.variance[slot + 1 :]
    return DenseTensor(out, variance)


def lower_index(t: DenseTensor, slot: int, metric: MetricPair) -> DenseTensor:
    _check_slot(t, slot)
    if t.variance[slot] != "u":
        raise VarianceMismatch(f"slot {slot} is already covariant")
    out = np.moveaxis(np.tensordot(metric.g, t.components, axes=([1], [slot])), 0, slot)
    variance = t.variance[:slot] + ("d",) + t.variance[slot + 1 :]
    return DenseTensor(out, variance)


def act(t: DenseTensor, slot: int, endo: np.ndarray) -> DenseTensor:
    """Feed a (1,1) tensor into a covariant slot: the component realization of L(.., Pz, ..).

    ``endo[s, k]`` is the mixed component E^s_k; the result at index k of
    ``slot`` is sum_s t[.., s, ..] E^s_k.
    """
    _check_slot(t, slot)
    if t.variance[slot] != "d":
        raise VarianceMismatch("an endomorphism can only be fed into a covariant slot")
    out = np.moveaxis(np.tensordot(t.components, endo, axes=([slot], [0])), -1, slot)
    return DenseTensor(out, t.variance)


def cyclic_sum_3(t: DenseTensor | np.ndarray):
    """Cyclic sum over the first three slots of a rank-4 tensor.

    out[i, j, k, w] = t[i, j, k, w] + t[j, k, i, w] + t[k, i, j, w].
    Accepts a DenseTensor (returns one) or a bare rank-4 array.
    """
    comps = t.components if isinstance(t, DenseTensor) else np.asarray(t, dtype=float)
    if comps.ndim != 4:
        raise RankMismatch(f"cyclic_sum_3 needs rank 4, got {comps.ndim}")
    out = comps + np.einsum("jkiw->ijkw", comps) + np.einsum("kijw->ijkw", comps)
    if isinstance(t, DenseTensor):
        return DenseTensor(out, t.variance)
    return out
