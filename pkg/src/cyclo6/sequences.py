"""Binary sequences carried by supports, and their periodic autocorrelation.

A support in ``Z_2 x Z_p`` is moved to ``Z_{2p}`` through ``t -> (t mod 2,
t mod p)``; positions in the support carry ``-1``, all others ``+1``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

import numpy as np

from .distance import SupportSet


@dataclass(frozen=True)
class BipolarSequence:
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.ndim != 1 or len(e) < 2:
            raise ValueError("a sequence needs period >= 2")
        if not np.all(np.abs(e) == 1):
            raise ValueError("entries must be +1 or -1")
        object.__setattr__(self, "entries", e)

    @property
    def period(self) -> int:
        return len(self.entries)

    def shifted(self, k: int) -> BipolarSequence:
        return BipolarSequence(np.roll(self.entries, -k))

    def bits(self) -> str:
        """0/1 string; 1 marks a -1 entry."""
        return "".join("1" if v < 0 else "0" for v in self.entries)


@dataclass(frozen=True)
class AcfProfile:
    period: int
    values: np.ndarray  # values[tau] for tau = 0..n-1

    @property
    def peak(self) -> int:
        return int(self.values[0])

    @property
    def offpeak(self) -> dict:
        return {tau: int(v) for tau, v in enumerate(self.values) if tau}

    @property
    def levels(self) -> list[int]:
        return sorted(set(self.values[1:].tolist()))

    @property
    def energy(self) -> int:
        return int((self.values**2).sum())

    def __eq__(self, other):
        return (
            isinstance(other, AcfProfile)
            and self.period == other.period
            and np.array_equal(self.values, other.values)
        )

    def to_dict(self):
        return {
            "period": self.period,
            "peak": self.peak,
            "levels": self.levels,
            "values": self.values.tolist(),
        }


def support_to_sequence(D: SupportSet) -> BipolarSequence:
    n = D.order
    if D.is_product:
        if gcd(2, D.p) != 1:
            raise ValueError("the CRT map needs p odd")
        marks = [((t % 2, t % D.p) in D.members) for t in range(n)]
    else:
        marks = [t in D.members for t in range(n)]
    return BipolarSequence(np.where(marks, -1, 1))


def sequence_to_support(s: BipolarSequence, p: int | None = None) -> SupportSet:
    """Inverse of :func:`support_to_sequence`."""
    pos = np.flatnonzero(s.entries < 0).tolist()
    if p is None:
        return SupportSet.cyclic(s.period, pos)
    if s.period != 2 * p:
        raise ValueError(f"period {s.period} is not 2p for p={p}")
    return SupportSet.product(p, [(t % 2, t % p) for t in pos])


def periodic_autocorrelation(s: BipolarSequence) -> AcfProfile:
    """``A(tau) = sum_t s[t] * s[(t + tau) mod n]`` for every ``tau``."""
    e = s.entries
    vals = np.correlate(np.concatenate([e, e]), e, mode="valid")[: len(e)]
    return AcfProfile(len(e), vals.astype(np.int64))


class Levels(NamedTuple):
    count: int
    values: list
    three_level: bool


def classify_levels(acf: AcfProfile) -> Levels:
    """Distinct autocorrelation values, peak included.

    ``three_level`` requires the peak plus exactly two off-peak values four
    apart; a gap of eight also gives three values but no adjacent distances.
    """
    values = sorted(set(acf.values.tolist()))
    off = acf.levels
    three = len(values) == 3 and len(off) == 2 and off[1] - off[0] == 4
    return Levels(len(values), values, three)


def is_three_level(acf: AcfProfile) -> bool:
    return classify_levels(acf).three_level


def acf_csv(acf: AcfProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["shift", "correlation"])
    for tau, v in enumerate(acf.values.tolist()):
        w.writerow([tau, v])
    return buf.getvalue()


def sequences_csv(seqs) -> str:
    """One row of comma-separated +1/-1 values per sequence."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for s in seqs:
        w.writerow(s.entries.tolist())
    return buf.getvalue()
