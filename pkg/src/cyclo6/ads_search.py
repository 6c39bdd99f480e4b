"""Almost-difference-set classification and the exhaustive DHM sweep.

A DHM support ``{0} x D_I U {1} x D_J`` (optionally with ``(0, 0)``) has a
distance function that is constant on ``{w1} x D_h`` for each class, so
its whole spectrum is determined by ``2d + 1`` numbers. For all index-set
pairs at once these come out of one matrix product per class shift,
``S @ M_h @ S.T`` with ``S`` the subset indicator matrix and ``M_h`` the
shifted cyclotomic-number matrix.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import distance
from .distance import C, C_PRIME, VARIANTS, DistanceSpectrum, SupportSet
from .field_core import CyclotomyContext, CyclotomyError, build_context, odd_primes

log = logging.getLogger(__name__)

DIFFERENCE_SET = "DifferenceSet"
ALMOST_DIFFERENCE_SET = "AlmostDifferenceSet"
NEITHER = "Neither"


@dataclass(frozen=True)
class AdsReport:
    classification: str
    spectrum: DistanceSpectrum
    n: int
    k: int
    lam: int | None = None
    t: int | None = None

    @property
    def is_ads(self) -> bool:
        return self.classification == ALMOST_DIFFERENCE_SET

    @property
    def parameters(self):
        if self.classification == ALMOST_DIFFERENCE_SET:
            return (self.n, self.k, self.lam, self.t)
        if self.classification == DIFFERENCE_SET:
            return (self.n, self.k, self.lam)
        return None

    def to_dict(self):
        return {
            "classification": self.classification,
            "parameters": None if self.parameters is None else list(self.parameters),
            "spectrum": self.spectrum.to_dict(),
        }


def classify_spectrum(spec: DistanceSpectrum, n: int, k: int) -> AdsReport:
    """Classify from a spectrum: one value is a difference set, two adjacent
    values an almost difference set, anything else neither."""
    vals = spec.values
    if len(vals) == 1:
        return AdsReport(DIFFERENCE_SET, spec, n, k, lam=vals[0])
    if len(vals) == 2 and vals[1] - vals[0] == 1:
        return AdsReport(ALMOST_DIFFERENCE_SET, spec, n, k, lam=vals[0], t=spec.histogram[vals[0]])
    return AdsReport(NEITHER, spec, n, k)


def classify_ads(D: SupportSet) -> AdsReport:
    if not 0 < len(D) < D.order:
        raise ValueError("support must be nonempty and proper")
    return classify_spectrum(distance.spectrum(D), D.order, len(D))


# -- class route -------------------------------------------------------------


def index_sets(d: int, sizes=None):
    """Nonempty proper subsets of ``Z_d`` ordered by (size, lex)."""
    sizes = range(1, d) if sizes is None else sorted(sizes)
    return [s for k in sizes for s in combinations(range(d), k)]


def _class_tables(ctx: CyclotomyContext, subsets):
    """``P[h, a, b] = d_{I_a, I_b}(w)`` for ``w**-1`` in ``D_h``."""
    d = ctx.d
    S = np.zeros((len(subsets), d), dtype=np.int64)
    for a, s in enumerate(subsets):
        S[a, list(s)] = 1
    M = ctx.cyclotomic_matrix()
    P = np.empty((d, len(subsets), len(subsets)), dtype=np.int64)
    for h in range(d):
        idx = (np.arange(d) + h) % d
        P[h] = S @ M[np.ix_(idx, idx)] @ S.T
    return S, P


def _shift_values(ctx, S, P, rows_I, rows_J, variant):
    """Distance values for each requested pair over the ``2d + 1`` shift
    classes, plus the multiplicity of each shift class.

    Column ``h`` (``w1 = 0``) and ``d + h`` (``w1 = 1``) stand for all
    ``w2`` with ``w2**-1`` in ``D_h``; the last column is ``(1, 0)``.
    """
    d, f = ctx.d, ctx.f
    diagI = P[:, rows_I, rows_I].T  # (pairs, d)
    diagJ = P[:, rows_J, rows_J].T
    cross = (P[:, rows_I, rows_J] + P[:, rows_J, rows_I]).T
    overlap = (S[rows_I] * S[rows_J]).sum(axis=1)
    vals = np.concatenate([diagI + diagJ, cross, (2 * f * overlap)[:, None]], axis=1)
    if variant == C_PRIME:
        # w2**-1 in D_h  =>  w2 in D_{-h} and -w2 in D_{-h + class(-1)}
        neg1 = ctx.cls(-1)
        own = np.array([(-h) % d for h in range(d)])
        corr_I = S[rows_I][:, own] + S[rows_I][:, (own + neg1) % d]
        corr_J = S[rows_J][:, own] + S[rows_J][:, (own + neg1) % d]
        vals[:, :d] += corr_I
        vals[:, d : 2 * d] += corr_J
    weights = np.array([f] * (2 * d) + [1], dtype=np.int64)
    return vals, weights


def fast_spectrum(ctx: CyclotomyContext, I, J, variant: str = C) -> DistanceSpectrum:
    """Spectrum of a DHM support from cyclotomic numbers alone."""
    I = distance.as_index_set(I, ctx.d)
    J = distance.as_index_set(J, ctx.d)
    subsets = sorted({I, J})
    S, P = _class_tables(ctx, subsets)
    vals, weights = _shift_values(
        ctx, S, P, np.array([subsets.index(I)]), np.array([subsets.index(J)]), variant
    )
    hist = {}
    for v, w in zip(vals[0].tolist(), weights.tolist()):
        hist[v] = hist.get(v, 0) + w
    return DistanceSpectrum.from_counts(hist)


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SearchRow:
    I: tuple
    J: tuple
    variant: str
    classification: str
    parameters: tuple | None

    def to_dict(self):
        return {
            "I": list(self.I),
            "J": list(self.J),
            "variant": self.variant,
            "classification": self.classification,
            "parameters": None if self.parameters is None else list(self.parameters),
        }


@dataclass
class SearchReport:
    p: int
    d: int
    rows: list[SearchRow] = field(default_factory=list)
    mixed: bool = False
    elapsed: float = 0.0

    @property
    def hits(self):
        return [r for r in self.rows if r.classification != NEITHER]

    @property
    def ads_hits(self):
        return [r for r in self.rows if r.classification == ALMOST_DIFFERENCE_SET]

    def summary(self):
        return {"p": self.p, "d": self.d, "rows": len(self.rows), "hits": len(self.hits)}


def iter_pairs(d: int, k_values=None, mixed: bool = False):
    """Index-set pairs in canonical order: (|I|, I, |J|, J).

    Without ``mixed`` only equal cardinalities are paired.
    """
    subsets = index_sets(d, k_values)
    for I in subsets:
        for J in subsets:
            if mixed or len(I) == len(J):
                yield I, J


def sweep_dhm(
    ctx: CyclotomyContext, k_values=None, variants=VARIANTS, mixed: bool = False
) -> SearchReport:
    """Classify every DHM support for the requested index-set pairs."""
    t0 = time.perf_counter()
    variants = [v for v in VARIANTS if v in set(variants)]
    subsets = index_sets(ctx.d, k_values)
    pos = {s: a for a, s in enumerate(subsets)}
    pairs = list(iter_pairs(ctx.d, k_values, mixed))
    rows_I = np.array([pos[I] for I, _ in pairs], dtype=np.int64)
    rows_J = np.array([pos[J] for _, J in pairs], dtype=np.int64)
    S, P = _class_tables(ctx, subsets)
    n = 2 * ctx.p

    per_variant = {}
    for variant in variants:
        vals, weights = _shift_values(ctx, S, P, rows_I, rows_J, variant)
        lo, hi = vals.min(axis=1), vals.max(axis=1)
        lam_count = ((vals == lo[:, None]) * weights).sum(axis=1)
        size = ctx.f * (S[rows_I].sum(axis=1) + S[rows_J].sum(axis=1)) + (variant == C_PRIME)
        per_variant[variant] = (lo, hi, lam_count, size)

    report = SearchReport(ctx.p, ctx.d, mixed=mixed)
    for r, (I, J) in enumerate(pairs):
        for variant in variants:
            lo, hi, lam_count, size = per_variant[variant]
            gap = int(hi[r] - lo[r])
            if gap == 0:
                cls, params = DIFFERENCE_SET, (n, int(size[r]), int(lo[r]))
            elif gap == 1:
                cls, params = ALMOST_DIFFERENCE_SET, (n, int(size[r]), int(lo[r]), int(lam_count[r]))
            else:
                cls, params = NEITHER, None
            report.rows.append(SearchRow(I, J, variant, cls, params))
    report.elapsed = time.perf_counter() - t0
    return report


@dataclass
class PrimeResult:
    p: int
    d: int
    rows: int = 0
    hits: list[SearchRow] = field(default_factory=list)
    alpha: int | None = None
    A: int | None = None
    B: int | None = None
    m_mod3: int | None = None
    error: str | None = None
    all_rows: list[SearchRow] | None = None

    def to_dict(self):
        out = {
            "p": self.p,
            "d": self.d,
            "alpha": self.alpha,
            "A": self.A,
            "B": self.B,
            "m_mod3": self.m_mod3,
            "rows": self.rows,
            "hit_count": len(self.hits),
            "hits": [h.to_dict() for h in self.hits],
            "error": self.error,
        }
        if self.all_rows is not None:
            out["all_rows"] = [r.to_dict() for r in self.all_rows]
        return out


def search_prime(
    p: int, d: int = 6, k_values=None, variants=VARIANTS, mixed=True, keep_rows=False
) -> PrimeResult:
    """Sweep one prime; failures are recorded on the result, not raised."""
    try:
        ctx = build_context(p, d)
        rep = sweep_dhm(ctx, k_values, variants, mixed)
    except (CyclotomyError, RuntimeError) as exc:
        log.warning("p=%d skipped: %s", p, exc)
        return PrimeResult(p, d, error=str(exc))
    return PrimeResult(
        p, d, rows=len(rep.rows), hits=rep.hits, alpha=ctx.alpha, A=ctx.A, B=ctx.B,
        m_mod3=ctx.m_mod3, all_rows=rep.rows if keep_rows else None,
    )


@dataclass
class TheoremReport:
    d: int
    primes: list[PrimeResult] = field(default_factory=list)

    @property
    def counterexamples(self):
        return [(r.p, h) for r in self.primes for h in r.hits]

    @property
    def holds(self) -> bool:
        return not self.counterexamples and not any(r.error for r in self.primes)

    def to_dict(self):
        return {
            "d": self.d,
            "prime_count": len(self.primes),
            "total_rows": sum(r.rows for r in self.primes),
            "counterexamples": [dict(p=p, **h.to_dict()) for p, h in self.counterexamples],
            "holds": self.holds,
            "primes": [r.to_dict() for r in self.primes],
        }


def theorem_primes(p_min: int, p_max: int, d: int = 6):
    """Primes the sweep covers: ``p = 1 (mod 2d)`` so that ``f`` is even."""
    return odd_primes(p_min, p_max, 2 * d, 1)


def verify_theorem1(p_max: int, p_min: int = 13, mixed: bool = True, jobs: int = 1) -> TheoremReport:
    """Sweep every prime ``p = 1 (mod 12)`` in range at order 6.

    Any hit lands in ``counterexamples``; nothing is raised.
    """
    from .parallel import ordered_map

    primes = theorem_primes(p_min, p_max, 6)
    results = ordered_map(_theorem_task, [(p, mixed) for p in primes], jobs)
    return TheoremReport(6, results)


def _theorem_task(args):
    p, mixed = args
    return search_prime(p, 6, None, VARIANTS, mixed)


@dataclass
class Lemma8Report:
    p: int
    m_mod3: int
    report: AdsReport
    closed_form: dict

    def to_dict(self):
        return {
            "p": self.p,
            "m_mod3": self.m_mod3,
            "ads": self.report.to_dict(),
            "closed_form": {k: str(v) for k, v in self.closed_form.items()},
        }


def verify_lemma8(ctx: CyclotomyContext, variant: str = C) -> Lemma8Report:
    """Classify the canonical pair and list the closed-form values beside it."""
    from .cyclo6_formulas import CANONICAL_I, CANONICAL_J, lemma7_dC_formula

    support = distance.build_dhm_support(ctx, CANONICAL_I, CANONICAL_J, variant)
    report = classify_ads(support)
    closed = {}
    if ctx.has_order6_formulas:
        for w1 in (0, 1):
            for h in range(6):
                closed[f"w1={w1},h={h}"] = lemma7_dC_formula(ctx, w1, h)
        closed["w1=1,w2=0"] = lemma7_dC_formula(ctx, 1, None)
    return Lemma8Report(ctx.p, ctx.m_mod3, report, closed)
