"""Difference (distance) functions over Z_n and Z_2 x Z_p.

Two routes are kept side by side. The direct route materializes a support
and counts ``|(D + e) & D|``; it is the oracle. The class route uses the
fact that for a union of cyclotomic classes the count at ``w`` only depends
on the class of ``w**-1`` and is a sum of cyclotomic numbers.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .field_core import CyclotomyContext

C = "C"
C_PRIME = "C'"
VARIANTS = (C, C_PRIME)


def as_index_set(members: Iterable[int], d: int) -> tuple[int, ...]:
    """Validate a nonempty proper subset of ``{0, ..., d-1}``; returns it sorted."""
    out = tuple(sorted({int(i) for i in members}))
    if any(i < 0 or i >= d for i in out):
        raise ValueError(f"index set {out} not contained in Z_{d}")
    if not 1 <= len(out) < d:
        raise ValueError(f"index set must have between 1 and {d - 1} members, got {out}")
    return out


@dataclass(frozen=True)
class SupportSet:
    """A subset of ``Z_n`` (``p is None``) or of ``Z_2 x Z_p``.

    Product-group elements are pairs ``(w1, w2)``; cyclic ones are ints.
    """

    order: int
    members: frozenset
    p: int | None = None
    origin_included: bool = False

    @classmethod
    def cyclic(cls, n, members):
        members = frozenset(int(x) % n for x in members)
        return cls(order=n, members=members)

    @classmethod
    def product(cls, p, members, origin_included=False):
        members = frozenset((int(a) % 2, int(b) % p) for a, b in members)
        return cls(order=2 * p, members=members, p=p, origin_included=origin_included)

    @property
    def is_product(self) -> bool:
        return self.p is not None

    def __len__(self):
        return len(self.members)

    def add(self, x, e):
        if self.is_product:
            return ((x[0] + e[0]) % 2, (x[1] + e[1]) % self.p)
        return (x + e) % self.order

    def identity(self):
        return (0, 0) if self.is_product else 0

    def shifts(self):
        """Nonidentity group elements, ``(w1, w2)`` lexicographic."""
        if self.is_product:
            return [(a, b) for a in (0, 1) for b in range(self.p) if (a, b) != (0, 0)]
        return list(range(1, self.order))

    def indicator(self) -> np.ndarray:
        if self.is_product:
            ind = np.zeros((2, self.p), dtype=np.int64)
            for a, b in self.members:
                ind[a, b] = 1
            return ind
        ind = np.zeros(self.order, dtype=np.int64)
        ind[list(self.members)] = 1
        return ind


@dataclass(frozen=True)
class DistanceSpectrum:
    histogram: dict = field(default_factory=dict)
    total: int = 0

    @classmethod
    def from_counts(cls, counts) -> DistanceSpectrum:
        hist = {int(v): int(c) for v, c in sorted(counts.items()) if c}
        return cls(histogram=hist, total=sum(hist.values()))

    @property
    def values(self):
        return sorted(self.histogram)

    @property
    def mass(self) -> int:
        return sum(v * c for v, c in self.histogram.items())

    def __add__(self, other):
        merged = Counter(self.histogram)
        merged.update(other.histogram)
        return DistanceSpectrum.from_counts(merged)

    def to_dict(self):
        return {"histogram": {str(v): c for v, c in self.histogram.items()}, "total": self.total}


def difference_function(D: SupportSet, e) -> int:
    """``|{x in D : x + e in D}|`` for a nonidentity shift ``e``."""
    if e == D.identity() or (D.is_product and tuple(e) == (0, 0)):
        raise ValueError("shift must be a nonidentity group element")
    if D.is_product:
        e = (int(e[0]) % 2, int(e[1]) % D.p)
    else:
        e = int(e) % D.order
        if e == 0:
            raise ValueError("shift must be a nonidentity group element")
    return sum(1 for x in D.members if D.add(x, e) in D.members)


def _cyclic_xcorr(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``out[s] = sum_t x[t] * y[(t + s) % n]`` with exact integer arithmetic."""
    n = len(x)
    return np.correlate(np.concatenate([y, y]), x, mode="valid")[:n]


def shift_counts(D: SupportSet) -> np.ndarray:
    """``d_D`` at every group element (identity included) as a dense array.

    For product groups the result has shape ``(2, p)``.
    """
    ind = D.indicator()
    if not D.is_product:
        return _cyclic_xcorr(ind, ind)
    out = np.zeros((2, D.p), dtype=np.int64)
    for w1 in (0, 1):
        for a in (0, 1):
            out[w1] += _cyclic_xcorr(ind[a], ind[(a + w1) % 2])
    return out


def spectrum(D: SupportSet) -> DistanceSpectrum:
    """Histogram of ``d_D`` over all nonidentity shifts."""
    counts = shift_counts(D).ravel()[1:]
    vals, mult = np.unique(counts, return_counts=True)
    return DistanceSpectrum.from_counts(dict(zip(vals.tolist(), mult.tolist())))


# -- cyclotomic supports -----------------------------------------------------


def build_dhm_support(ctx: CyclotomyContext, I, J, variant: str = C) -> SupportSet:
    """``{0} x D_I  U  {1} x D_J``, plus ``(0, 0)`` for the primed variant."""
    I = as_index_set(I, ctx.d)
    J = as_index_set(J, ctx.d)
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    members = [(0, int(x)) for x in ctx.union(I)] + [(1, int(x)) for x in ctx.union(J)]
    if variant == C_PRIME:
        members.append((0, 0))
    return SupportSet.product(ctx.p, members, origin_included=variant == C_PRIME)


def class_representative(ctx: CyclotomyContext, h: int) -> int:
    """Some ``w`` with ``w**-1`` in ``D_h``."""
    return pow(ctx.alpha, (ctx.p - 1 - h % ctx.d) % (ctx.p - 1), ctx.p)


def d_IJ_oracle(ctx: CyclotomyContext, I, J, w: int) -> int:
    """``|(D_I + w) & D_J|`` by direct counting."""
    w %= ctx.p
    if w == 0:
        raise ValueError("w must be nonzero")
    cls = ctx.class_of
    I, J = set(I), set(J)
    return sum(1 for x in ctx.union(I) if cls[(int(x) + w) % ctx.p] in J)


def d_I_oracle(ctx, I, w):
    return d_IJ_oracle(ctx, I, I, w)


def dC_direct(ctx: CyclotomyContext, I, J, w1: int, w2: int, variant: str = C) -> int:
    """``d_C`` on the materialized support; the zero shift gives ``|C|``."""
    support = build_dhm_support(ctx, I, J, variant)
    if (w1 % 2, w2 % ctx.p) == (0, 0):
        return len(support)
    return difference_function(support, (w1, w2))


def dC_decomposed(ctx: CyclotomyContext, I, J, w1: int, w2: int) -> int:
    """``d_C`` via the split into ``d_I``, ``d_J`` and ``d_{I,J}`` over Z_p."""
    w1, w2 = w1 % 2, w2 % ctx.p
    I, J = as_index_set(I, ctx.d), as_index_set(J, ctx.d)
    if w1 == 0 and w2 == 0:
        return ctx.f * (len(I) + len(J))
    if w1 == 0:
        return d_IJ_oracle(ctx, I, I, w2) + d_IJ_oracle(ctx, J, J, w2)
    if w2:
        return d_IJ_oracle(ctx, I, J, w2) + d_IJ_oracle(ctx, J, I, w2)
    return 2 * ctx.f * len(set(I) & set(J))


def dCprime_correction(ctx: CyclotomyContext, I, J, w1: int, w2: int) -> int:
    """``d_{C'} - d_C``: ``|D_I & {w2, -w2}|`` (``w1 = 0``) or the ``D_J`` analogue."""
    w1, w2 = w1 % 2, w2 % ctx.p
    if w2 == 0:
        return 0
    members = set(I) if w1 == 0 else set(J)
    return sum(ctx.cls(x) in members for x in (w2, ctx.p - w2))


# -- class route -------------------------------------------------------------


def class_distance(ctx: CyclotomyContext, I, J, h: int) -> int:
    """``d_{I,J}(w)`` for ``w**-1`` in ``D_h``: ``sum (i+h, j+h)_d``."""
    M = ctx.cyclotomic_matrix()
    d = ctx.d
    return int(sum(M[(i + h) % d, (j + h) % d] for i in I for j in J))
