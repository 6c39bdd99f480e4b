"""Closed forms for cyclotomy of order 6 (f even).

The tables below are transcribed literally. Each entry is a coefficient
quadruple ``(c_p, c_A, c_B, c_1)`` together with a denominator, so that a
value is ``(c_p*p + c_A*A + c_B*B + c_1) / den``. Evaluation is exact
(:class:`fractions.Fraction`); non-integral values are reported, never
rounded.

Nothing here is trusted: :func:`verify_formulas` checks every entry against
direct counting, and :func:`derive_distance_coefficients` re-derives the
distance closed forms by expanding the class-pair sum through the
reduction table.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .field_core import CyclotomyContext, CyclotomyError

IRREDUCIBLE = ((0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (2, 4))

# fmt: off
TABLE1 = (
    ((0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5)),
    ((0, 1), (0, 5), (1, 2), (1, 3), (1, 4), (1, 2)),
    ((0, 2), (1, 2), (0, 4), (1, 4), (2, 4), (1, 3)),
    ((0, 3), (1, 3), (1, 4), (0, 3), (1, 3), (1, 4)),
    ((0, 4), (1, 4), (2, 4), (1, 3), (0, 2), (1, 2)),
    ((0, 5), (1, 2), (1, 3), (1, 4), (1, 2), (0, 1)),
)

# 36 * (h, k)_6, keyed by m mod 3
TABLE2 = {
    0: {(0, 0): (1, -20, 0, -17), (0, 1): (1, 4, 18, -5), (0, 2): (1, 4, 6, -5),
        (0, 3): (1, 4, 0, -5), (0, 4): (1, 4, -6, -5), (0, 5): (1, 4, -18, -5),
        (1, 2): (1, -2, 0, 1), (1, 3): (1, -2, 0, 1), (1, 4): (1, -2, 0, 1),
        (2, 4): (1, -2, 0, 1)},
    1: {(0, 0): (1, -8, 6, -17), (0, 1): (1, 4, 12, -5), (0, 2): (1, 4, -6, -5),
        (0, 3): (1, 4, -6, -5), (0, 4): (1, -8, 0, -5), (0, 5): (1, 4, -6, -5),
        (1, 2): (1, -2, -6, 1), (1, 3): (1, -2, -6, 1), (1, 4): (1, -2, 12, 1),
        (2, 4): (1, 10, 6, 1)},
    2: {(0, 0): (1, -8, -6, -17), (0, 1): (1, 4, 6, -5), (0, 2): (1, -8, 0, -5),
        (0, 3): (1, 4, 6, -5), (0, 4): (1, 4, 6, -5), (0, 5): (1, 4, -12, -5),
        (1, 2): (1, -2, 6, 1), (1, 3): (1, -2, -12, 1), (1, 4): (1, -2, 6, 1),
        (2, 4): (1, 10, -6, 1)},
}

# distance closed forms for I = {0,1,2}, J = {0,4,5}; all over denominator 12,
# indexed [m mod 3][h] with h the class of w^-1
_D_I = {
    0: ((3, 0, 8, -15), (3, 0, -8, -3), (3, 0, 0, -3),
        (3, 0, 8, -3), (3, 0, -8, -15), (3, 0, 0, -15)),
    1: ((3, 0, 0, -15), (3, -4, -4, -3), (3, 4, 4, -3),
        (3, 0, 0, -3), (3, -4, -4, -15), (3, -4, -4, 15)),
    2: ((3, -4, 4, -15), (3, 0, 0, -3), (3, 4, -4, -3),
        (3, -4, 4, -3), (3, 0, 0, -15), (3, 4, -4, -15)),
}
_D_J = {
    0: ((3, 0, -8, -15), (3, 0, 0, -15), (3, 0, 8, -15),
        (3, 0, -8, -3), (3, 0, 0, -3), (3, 0, 8, -3)),
    1: ((3, -4, -4, -15), (3, 4, 4, -15), (3, 0, 0, -15),
        (3, -4, -4, -3), (3, 4, 4, -3), (3, 0, 0, -3)),
    2: ((3, 0, 0, -15), (3, 4, -4, -15), (3, -4, 4, -15),
        (3, 0, 0, -3), (3, 4, -4, -3), (3, -4, 4, -3)),
}
_D_IJ = {
    0: ((3, -4, 0, -11), (3, 2, 2, -5), (3, 2, -2, -5),
        (3, -4, 0, 1), (3, 2, 2, -5), (3, 2, -2, -5)),
    1: ((3, 0, 4, -11), (3, 2, -6, -5), (3, -2, 2, -5),
        (3, 0, 4, 1), (3, 2, -6, -5), (3, -2, 2, -5)),
    2: ((3, 0, -4, -11), (3, -2, -2, -5), (3, 2, 6, -5),
        (3, 0, -4, 1), (3, -2, -2, -5), (3, 2, 6, -5)),
}
# d_C over GF(2) x Z_p, denominator 6; [m mod 3][w1][h]
_D_C = {
    0: (((3, 0, 0, -15), (3, 0, -4, -9), (3, 0, 4, -9),
         (3, 0, 0, -3), (3, 0, -4, -9), (3, 0, 4, -9)),
        ((3, -4, 0, -11), (3, 2, 2, -5), (3, 2, -2, -5),
         (3, -4, 0, 1), (3, 2, 2, -5), (3, 2, -2, -5))),
    1: (((3, -2, -2, -15), (3, 0, 0, -9), (3, 2, 2, -9),
         (3, -2, -2, -3), (3, 0, 0, -9), (3, 2, 2, -9)),
        ((3, 0, 4, -11), (3, 2, -6, -5), (3, -2, 2, -5),
         (3, 0, 4, 1), (3, 2, -6, -5), (3, -2, 2, -5))),
    2: (((3, -2, 2, -15), (3, 2, -2, -9), (3, 0, 0, -9),
         (3, -2, 2, -3), (3, 2, -2, -9), (3, 0, 0, -9)),
        ((3, 0, -4, -11), (3, -2, -2, -5), (3, 2, 6, -5),
         (3, 0, -4, 1), (3, -2, -2, -5), (3, 2, 6, -5))),
}
_D_C_W2_ZERO = (2, 0, 0, -2)  # (p - 1) / 3, over 6
# fmt: on

CANONICAL_I = (0, 1, 2)
CANONICAL_J = (0, 4, 5)

#: which -> (table, denominator)
LEMMA_TABLES = {"d_I": (_D_I, 12), "d_J": (_D_J, 12), "d_IJ": (_D_IJ, 12)}


@dataclass(frozen=True)
class AffineFormula:
    """``(c_p*p + c_A*A + c_B*B + c_1) / den``."""

    c_p: Fraction
    c_A: Fraction
    c_B: Fraction
    c_1: Fraction

    @classmethod
    def from_ints(cls, coeffs, den=1):
        return cls(*(Fraction(c, den) for c in coeffs))

    def __call__(self, p, a, b) -> Fraction:
        return self.c_p * p + self.c_A * a + self.c_B * b + self.c_1

    def __add__(self, other):
        return AffineFormula(*(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return AffineFormula(*(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def scale(self, k) -> AffineFormula:
        return AffineFormula(*(k * x for x in self.coeffs))

    @property
    def coeffs(self):
        return (self.c_p, self.c_A, self.c_B, self.c_1)

    def __str__(self):
        terms = []
        for c, sym in zip(self.coeffs, ("p", "A", "B", "")):
            if c == 0:
                continue
            mag = abs(c)
            body = sym if (mag == 1 and sym) else (f"{mag}{sym}" if sym else f"{mag}")
            if sym and mag != 1 and mag.denominator != 1:
                body = f"({mag}){sym}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {t}" for s, t in terms[1:])


ZERO = AffineFormula.from_ints((0, 0, 0, 0))


def reduce_pair(h: int, k: int) -> tuple[int, int]:
    """Map ``(h, k)_6`` to the irreducible cyclotomic number it equals."""
    if not (0 <= h < 6 and 0 <= k < 6):
        raise IndexError("class indices must lie in [0, 6)")
    return TABLE1[h][k]


def _require_calibrated(ctx):
    if ctx.d != 6 or not ctx.has_order6_formulas:
        raise CyclotomyError("closed forms available only for d=6, f even")


def table2_formula(m_mod3: int, h: int, k: int) -> AffineFormula:
    """``(h, k)_6`` as an affine formula (already divided by 36)."""
    return AffineFormula.from_ints(TABLE2[m_mod3][reduce_pair(h, k)], 36)


def cyclotomic_number_formula(ctx: CyclotomyContext, h: int, k: int) -> int:
    _require_calibrated(ctx)
    raw = 36 * table2_formula(ctx.m_mod3, h, k)(ctx.p, ctx.A, ctx.B)
    if raw.denominator != 1 or raw % 36 or raw < 0:
        raise CyclotomyError(
            f"convention mismatch: 36*({h},{k})_6 = {raw} at p={ctx.p}"
        )
    return int(raw) // 36


def printed_lemma_formula(m_mod3: int, which: str, h: int) -> AffineFormula:
    table, den = LEMMA_TABLES[which]
    return AffineFormula.from_ints(table[m_mod3][h], den)


def printed_dC_formula(m_mod3: int, w1: int, h: int | None) -> AffineFormula:
    """Closed form for ``d_C(w1, w2)``; ``h=None`` means ``w2 = 0``."""
    if h is None:
        if w1 == 1:
            return AffineFormula.from_ints(_D_C_W2_ZERO, 6)
        # |D_I| + |D_J| = 6f = p - 1
        return AffineFormula.from_ints((1, 0, 0, -1))
    return AffineFormula.from_ints(_D_C[m_mod3][w1][h], 6)


def lemma_distance_formula(ctx: CyclotomyContext, which: str, h: int) -> Fraction:
    """Printed closed form of ``d_I``, ``d_J`` or ``d_IJ`` at class ``h`` of ``w^-1``."""
    _require_calibrated(ctx)
    if which not in LEMMA_TABLES:
        raise ValueError(f"which must be one of {sorted(LEMMA_TABLES)}")
    return printed_lemma_formula(ctx.m_mod3, which, h % 6)(ctx.p, ctx.A, ctx.B)


def lemma7_dC_formula(ctx: CyclotomyContext, w1: int, h: int | None) -> Fraction:
    _require_calibrated(ctx)
    return printed_dC_formula(ctx.m_mod3, w1, None if h is None else h % 6)(
        ctx.p, ctx.A, ctx.B
    )


# -- symbolic re-derivation ------------------------------------------------


def derive_pair_sum(m_mod3: int, I, J, h: int) -> AffineFormula:
    """Expand ``sum_{i in I, j in J} (i+h, j+h)_6`` through the two tables."""
    total = ZERO
    for i, j in product(I, J):
        total = total + table2_formula(m_mod3, (i + h) % 6, (j + h) % 6)
    return total


def derive_distance_coefficients(m_mod3: int, which: str, h: int) -> AffineFormula:
    if which == "d_I":
        return derive_pair_sum(m_mod3, CANONICAL_I, CANONICAL_I, h)
    if which == "d_J":
        return derive_pair_sum(m_mod3, CANONICAL_J, CANONICAL_J, h)
    if which == "d_IJ":
        return derive_pair_sum(m_mod3, CANONICAL_I, CANONICAL_J, h)
    raise ValueError(which)


def derive_dC_coefficients(m_mod3: int, w1: int, h: int | None) -> AffineFormula:
    if h is None:
        return printed_dC_formula(m_mod3, w1, None)
    if w1 == 0:
        return derive_distance_coefficients(m_mod3, "d_I", h) + derive_distance_coefficients(
            m_mod3, "d_J", h
        )
    return derive_pair_sum(m_mod3, CANONICAL_I, CANONICAL_J, h) + derive_pair_sum(
        m_mod3, CANONICAL_J, CANONICAL_I, h
    )


# -- verification against direct counting ------------------------------------


@dataclass
class FormulaCheck:
    source: str  # "table2", "d_I", "d_J", "d_IJ", "d_C"
    case: str
    printed: Fraction
    oracle: int
    derived: Fraction | None = None

    @property
    def match(self) -> bool:
        return self.printed == self.oracle

    def to_dict(self):
        return {
            "source": self.source,
            "case": self.case,
            "printed": str(self.printed),
            "oracle": self.oracle,
            "derived": None if self.derived is None else str(self.derived),
            "match": self.match,
        }


@dataclass
class DiscrepancyReport:
    p: int
    alpha: int
    A: int
    B: int
    m_mod3: int
    checks: list[FormulaCheck] = field(default_factory=list)

    @property
    def mismatches(self):
        return [c for c in self.checks if not c.match]

    def count(self, source):
        rows = [c for c in self.checks if c.source == source]
        return sum(c.match for c in rows), len(rows)

    def to_dict(self):
        return {
            "p": self.p,
            "alpha": self.alpha,
            "A": self.A,
            "B": self.B,
            "m_mod3": self.m_mod3,
            "checks": [c.to_dict() for c in self.checks],
            "mismatch_count": len(self.mismatches),
        }


def _case_label(w1, h):
    return f"w1={w1},w2=0" if h is None else f"w1={w1},h={h}"


def verify_formulas(ctx: CyclotomyContext) -> DiscrepancyReport:
    """Compare every closed form with direct counting at this prime."""
    from . import distance

    _require_calibrated(ctx)
    report = DiscrepancyReport(ctx.p, ctx.alpha, ctx.A, ctx.B, ctx.m_mod3)
    truth = ctx.cyclotomic_matrix()
    m3, args = ctx.m_mod3, (ctx.p, ctx.A, ctx.B)

    for h, k in product(range(6), repeat=2):
        formula = table2_formula(m3, h, k)
        report.checks.append(
            FormulaCheck("table2", f"({h},{k})", formula(*args), int(truth[h, k]))
        )

    reps = [distance.class_representative(ctx, h) for h in range(6)]
    I, J = CANONICAL_I, CANONICAL_J
    for which, (a, b) in (("d_I", (I, I)), ("d_J", (J, J)), ("d_IJ", (I, J))):
        for h in range(6):
            report.checks.append(
                FormulaCheck(
                    which,
                    f"h={h}",
                    printed_lemma_formula(m3, which, h)(*args),
                    distance.d_IJ_oracle(ctx, a, b, reps[h]),
                    derive_distance_coefficients(m3, which, h)(*args),
                )
            )

    for w1 in (0, 1):
        for h in [*range(6), None]:
            w2 = 0 if h is None else reps[h]
            if (w1, w2) == (0, 0):
                continue
            report.checks.append(
                FormulaCheck(
                    "d_C",
                    _case_label(w1, h),
                    printed_dC_formula(m3, w1, h)(*args),
                    distance.dC_direct(ctx, I, J, w1, w2),
                    derive_dC_coefficients(m3, w1, h)(*args),
                )
            )
    return report


def fit_affine(samples) -> AffineFormula | None:
    """Exact rational fit of ``value = c_p*p + c_A*A + c_B*B + c_1``.

    ``samples`` is an iterable of ``(p, A, B, value)``. Returns ``None`` when
    the samples do not determine the coefficients or no affine form fits
    every sample exactly.
    """
    from sympy import Matrix, Rational

    rows = [(int(p), int(a), int(b), 1) for p, a, b, _ in samples]
    ys = [Rational(str(v)) for *_, v in samples]
    if len(rows) < 4:
        return None
    X = Matrix(rows)
    y = Matrix(ys)
    gram = X.T * X
    if gram.det() == 0:
        return None
    sol = gram.LUsolve(X.T * y)
    if X * sol != y:
        return None
    return AffineFormula(*(Fraction(int(c.p), int(c.q)) for c in sol))


def establish_errata(reports, min_primes: int = 25):
    """Find closed-form entries that fail persistently and fit their true form.

    Returns ``{(source, m_mod3, case): summary}`` for each entry that
    mismatched at least once. ``summary["corrected"]`` holds the empirically
    fitted formula when at least ``min_primes`` primes of that residue class
    were examined and one affine form reproduces every oracle value.
    """
    by_key = {}
    for rep in reports:
        for chk in rep.checks:
            key = (chk.source, rep.m_mod3, chk.case)
            by_key.setdefault(key, []).append((rep, chk))

    out = {}
    for key, rows in sorted(by_key.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        bad = [c for _, c in rows if not c.match]
        if not bad:
            continue
        fitted = fit_affine([(r.p, r.A, r.B, c.oracle) for r, c in rows])
        out[key] = {
            "primes": len(rows),
            "mismatches": len(bad),
            "persistent": len(bad) == len(rows),
            "fitted": fitted,
            "corrected": fitted if fitted is not None and len(rows) >= min_primes else None,
        }
    return out


# Entries that fail against direct counting, with the affine form that
# reproduces it. Re-established by ``establish_errata`` in the test suite.
ERRATA: dict[tuple[str, int, str], AffineFormula] = {
    ("d_I", 1, "h=5"): AffineFormula.from_ints((3, 4, 4, -15), 12),
}


def corrected_lemma_formula(m_mod3: int, which: str, h: int) -> AffineFormula:
    """Printed closed form, with the known erratum applied."""
    return ERRATA.get((which, m_mod3, f"h={h}"), printed_lemma_formula(m_mod3, which, h))
