"""Prime-field arithmetic and cyclotomic class tables.

Everything downstream is keyed on a :class:`CyclotomyContext`, which fixes a
prime ``p``, an order ``d`` dividing ``p - 1`` and the smallest primitive root
``alpha``. The class table is dense (one entry per residue) so that class
lookup is a single index operation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np
from sympy import factorint, isprime

#: marker stored in ``class_of[0]``; zero belongs to no cyclotomic class
NOT_A_CLASS = -1


class CyclotomyError(ValueError):
    """Invalid prime/order combination."""


class CalibrationError(RuntimeError):
    """The closed-form table could not be matched against direct counting."""


def _check_odd_prime(p):
    if not isinstance(p, (int, np.integer)) or p < 3 or p % 2 == 0 or not isprime(int(p)):
        raise CyclotomyError(f"{p} is not an odd prime")


def find_primitive_root(p: int) -> int:
    """Return the smallest primitive root of the odd prime ``p``."""
    _check_odd_prime(p)
    cofactors = [(p - 1) // q for q in factorint(p - 1)]
    for g in range(2, p):
        if all(pow(g, c, p) != 1 for c in cofactors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def decompose_quadratic_form(p: int) -> tuple[int, int]:
    """Return positive ``(A, B)`` with ``A**2 + 3*B**2 == p``.

    Representability requires ``p == 3`` or ``p % 3 == 1``.
    """
    if p % 3 != 1 and p != 3:
        raise CyclotomyError(f"{p} has no representation A^2 + 3B^2 (p mod 3 = {p % 3})")
    for b in range(1, isqrt(p // 3) + 1):
        rest = p - 3 * b * b
        a = isqrt(rest)
        if a * a == rest and a > 0:
            return a, b
    raise CyclotomyError(f"{p} has no representation A^2 + 3B^2")


@dataclass(frozen=True, eq=False)
class CyclotomyContext:
    """Cyclotomic classes of order ``d`` for the prime field GF(p).

    ``class_of[x]`` is the class index of the nonzero residue ``x`` and
    ``NOT_A_CLASS`` for ``x == 0``. For ``d == 6`` with ``f`` even the
    sign-calibrated ``A``, ``B`` and ``m_mod3`` are populated; otherwise they
    are ``None`` and :attr:`has_order6_formulas` is false.
    """

    p: int
    d: int
    f: int
    alpha: int
    class_of: np.ndarray = field(repr=False)
    log2: int | None = None
    A: int | None = None
    B: int | None = None
    m_mod3: int | None = None

    @property
    def has_order6_formulas(self) -> bool:
        return self.A is not None

    def cls(self, x: int) -> int:
        return int(self.class_of[x % self.p])

    def inverse_class(self, x: int) -> int:
        """Class index of ``x**-1``; this is what the closed forms are keyed on."""
        return (-self.cls(x)) % self.d

    def coset(self, i: int) -> np.ndarray:
        """Sorted elements of the class ``D_i``."""
        return np.flatnonzero(self.class_of == i % self.d)

    def union(self, indices) -> np.ndarray:
        return np.flatnonzero(np.isin(self.class_of, sorted(set(indices))))

    def cyclotomic_matrix(self) -> np.ndarray:
        """All ``d x d`` cyclotomic numbers at once (cached)."""
        cached = self.__dict__.get("_cyc")
        if cached is None:
            src = self.class_of[1 : self.p - 1]
            dst = self.class_of[2 : self.p]
            cached = np.zeros((self.d, self.d), dtype=np.int64)
            np.add.at(cached, (src, dst), 1)
            cached.setflags(write=False)
            object.__setattr__(self, "_cyc", cached)
        return cached

    def to_dict(self, full: bool = True) -> dict:
        out = {
            "p": self.p,
            "d": self.d,
            "f": self.f,
            "alpha": self.alpha,
            "A": self.A,
            "B": self.B,
            "m_mod3": self.m_mod3,
            "order6_formulas": self.has_order6_formulas,
        }
        if full:
            out["classes"] = [self.coset(i).tolist() for i in range(self.d)]
        return out


def build_context(p: int, d: int, calibrate: bool = True) -> CyclotomyContext:
    """Build the class table of order ``d`` for GF(p).

    With ``d == 6`` and ``f`` even the quadratic-form parameters are
    sign-calibrated against direct counting (see :func:`calibrate_signs`).
    """
    _check_odd_prime(p)
    if d < 2 or (p - 1) % d:
        raise CyclotomyError(f"{d} does not divide {p - 1}")
    f = (p - 1) // d
    alpha = find_primitive_root(p)

    class_of = np.full(p, NOT_A_CLASS, dtype=np.int64)
    log2 = None
    x = 1
    for k in range(p - 1):
        class_of[x] = k % d
        if x == 2:
            log2 = k
        x = x * alpha % p
    class_of.setflags(write=False)

    ctx = CyclotomyContext(p=p, d=d, f=f, alpha=alpha, class_of=class_of, log2=log2)
    if d == 6 and f % 2 == 0 and calibrate:
        a, b, m3 = calibrate_signs(ctx)
        object.__setattr__(ctx, "A", a)
        object.__setattr__(ctx, "B", b)
        object.__setattr__(ctx, "m_mod3", m3)
    elif d == 6:
        object.__setattr__(ctx, "m_mod3", log2 % 3)
    return ctx


def cyclotomic_number_bruteforce(ctx: CyclotomyContext, m: int, n: int) -> int:
    """``(m, n)_d``: count of ``x`` in ``D_m`` with ``x + 1`` in ``D_n``."""
    if not (0 <= m < ctx.d and 0 <= n < ctx.d):
        raise IndexError(f"class indices must lie in [0, {ctx.d})")
    count = 0
    for x in ctx.coset(m):
        y = (int(x) + 1) % ctx.p
        if y and ctx.class_of[y] == n:
            count += 1
    return count


def calibrate_signs(ctx: CyclotomyContext) -> tuple[int, int, int]:
    """Fix the signs of ``(A, B)`` so the order-6 table reproduces direct counts.

    Exactly one of the four sign choices must reproduce ``(0, 1)_6``; that
    choice is then required to reproduce all ten irreducible numbers.
    """
    # local import: the formula tables live one layer up
    from .cyclo6_formulas import IRREDUCIBLE, TABLE2

    if ctx.d != 6 or ctx.f % 2:
        raise CyclotomyError("sign calibration needs d = 6 and f even")
    a0, b0 = decompose_quadratic_form(ctx.p)
    m3 = ctx.log2 % 3
    truth = ctx.cyclotomic_matrix()
    target = cyclotomic_number_bruteforce(ctx, 0, 1)

    def value(coeffs, a, b):
        cp, ca, cb, c1 = coeffs
        return cp * ctx.p + ca * a + cb * b + c1

    matches = [
        (a, b)
        for a in (a0, -a0)
        for b in (b0, -b0)
        if value(TABLE2[m3][(0, 1)], a, b) == 36 * target
    ]
    if len(matches) != 1:
        raise CalibrationError(
            f"p={ctx.p}: {len(matches)} sign candidates reproduce (0,1)_6 (m mod 3 = {m3})"
        )
    a, b = matches[0]
    for pair in IRREDUCIBLE:
        if value(TABLE2[m3][pair], a, b) != 36 * int(truth[pair]):
            raise CalibrationError(
                f"p={ctx.p}: calibrated (A,B)=({a},{b}) fails at {pair} (m mod 3 = {m3})"
            )
    return a, b, m3


def odd_primes(lo: int, hi: int, modulus: int = 1, residue: int = 0):
    """Primes in ``[lo, hi]`` congruent to ``residue`` mod ``modulus``."""
    from sympy import primerange

    return [q for q in primerange(max(lo, 3), hi + 1) if q % modulus == residue % modulus]
