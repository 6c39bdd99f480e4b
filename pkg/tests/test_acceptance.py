"""End-to-end acceptance checks, one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""
import json
import random
import time
from pathlib import Path

import numpy as np
import pytest

from cyclo6 import reports
from cyclo6.ads_search import classify_ads
from cyclo6.cyclo6_formulas import CANONICAL_I, CANONICAL_J, establish_errata, verify_formulas
from cyclo6.distance import SupportSet, build_dhm_support, dC_decomposed, dC_direct
from cyclo6.field_core import build_context, odd_primes
from cyclo6.sequences import classify_levels, periodic_autocorrelation, support_to_sequence

GOLDEN = Path(__file__).parent / "golden" / "order4_hits.json"
RANDOM_SEED = 20260101


def verdict(number, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def contexts_2000():
    return [build_context(p, 6) for p in odd_primes(13, 2000, 12, 1)]


def test_criterion_1_table2_matches_bruteforce():
    t0 = time.perf_counter()
    primes = odd_primes(13, 2000, 12, 1)
    bad = []
    for p in primes:
        ctx = build_context(p, 6)
        rep = verify_formulas(ctx)
        bad += [(p, c.case) for c in rep.checks if c.source == "table2" and not c.match]
    elapsed = time.perf_counter() - t0
    ok = not bad and len(primes) == 70 and elapsed < 10
    verdict(1, ok, f"{len(primes)} primes x 36 numbers, {len(bad)} mismatches, {elapsed:.1f}s")


def test_criterion_2_mass_identities(contexts_2000):
    bad = []
    for ctx in contexts_2000:
        M = ctx.cyclotomic_matrix()
        want_rows = np.full(6, ctx.f)
        want_rows[0] -= 1
        if M.sum() != ctx.p - 2:
            bad.append((ctx.p, "total"))
        if not np.array_equal(M.sum(axis=1), want_rows):
            bad.append((ctx.p, "rows"))
        if not np.array_equal(M.sum(axis=0), want_rows):
            bad.append((ctx.p, "columns"))
    verdict(2, not bad, f"{len(contexts_2000)} contexts, failures={bad}")


def test_criterion_3_dC_entries():
    problems, flagged = [], []
    for p in (13, 37, 61, 73, 97):
        ctx = build_context(p, 6)
        for w1 in (0, 1):
            for w2 in range(p):
                if (w1, w2) == (0, 0):
                    continue
                if dC_direct(ctx, CANONICAL_I, CANONICAL_J, w1, w2) != dC_decomposed(
                    ctx, CANONICAL_I, CANONICAL_J, w1, w2
                ):
                    problems.append((p, w1, w2, "decomposition"))
        if dC_direct(ctx, CANONICAL_I, CANONICAL_J, 1, 0) * 3 != p - 1:
            problems.append((p, 1, 0, "(p-1)/3"))
        rep = verify_formulas(ctx)
        for c in rep.checks:
            if c.source != "d_C":
                continue
            # a closed form either agrees or shows up as a mismatch with both values
            if not c.match:
                row = c.to_dict()
                flagged.append((p, c.case, row["printed"], row["oracle"]))
                if c not in rep.mismatches:
                    problems.append((p, c.case, "unflagged"))
    verdict(3, not problems, f"problems={problems}, flagged closed forms={flagged}")


def test_criterion_4_discrepancy_detection(contexts_2000):
    reps = [verify_formulas(ctx) for ctx in contexts_2000]
    errata = establish_errata(reps)
    key = ("d_I", 1, "h=5")
    target = errata.get(key)
    at13 = next(c for c in reps[0].checks if (c.source, c.case) == ("d_I", "h=5"))
    # every other entry must be persistent in whichever direction it goes
    others_ok = all(v["persistent"] for k, v in errata.items() if k != key)
    # corrected pattern: one affine form reproduces the oracle at every m=1 prime
    same_pattern = target is not None and target["corrected"] is not None and all(
        target["corrected"](r.p, r.A, r.B) == c.oracle
        for r in reps if r.m_mod3 == 1
        for c in r.checks if (c.source, c.case) == ("d_I", "h=5")
    )
    ok = (
        target is not None and target["persistent"] and same_pattern and others_ok
        and at13.printed.denominator != 1
    )
    detail = (
        f"d_I m=1 h=5 {target['mismatches'] if target else 0}/{target['primes'] if target else 0} "
        f"mismatched, corrected={target['corrected'] if target else None}, "
        f"printed at p=13 is {at13.printed}, other flagged entries={sorted(k for k in errata if k != key)}"
    )
    verdict(4, ok, detail)


@pytest.fixture(scope="module")
def sweep_10000():
    mixed = reports.search_report(13, 10000, d=6, mixed=True, jobs=1)
    same = reports.search_report(13, 10000, d=6, mixed=False, jobs=1)
    return mixed, same


def test_criterion_5_no_order6_ads(sweep_10000):
    mixed, same = (r["result"] for r in sweep_10000)
    hits = mixed["total_hits"] + same["total_hits"]
    errors = mixed["skipped"] + same["skipped"]
    ok = (
        hits == 0 and not errors and mixed["prime_count"] == 300
        and not mixed["counterexample"] and not same["counterexample"]
    )
    verdict(
        5, ok,
        f"{mixed['prime_count']} primes, {mixed['total_rows']} mixed rows + "
        f"{same['total_rows']} same-k rows, {hits} hits, {len(errors)} skipped",
    )


@pytest.fixture(scope="module")
def order4():
    return reports.search_report(5, 100, d=4, jobs=1)


def test_criterion_6_order4_control(order4):
    res = order4["result"]
    got = [{"p": x["p"], "hits": x["hits"]} for x in res["primes"] if x["hits"]]
    ads = sum(h["classification"] == "AlmostDifferenceSet" for x in got for h in x["hits"])
    gold = json.loads(GOLDEN.read_text())["primes"]
    verdict(6, ads > 0 and got == gold, f"{ads} ADS rows over {res['prime_count']} primes, golden match={got == gold}")


def _acf_agrees(support):
    ads = classify_ads(support)
    acf = periodic_autocorrelation(support_to_sequence(support))
    levels = classify_levels(acf)
    if levels.three_level != ads.is_ads:
        return False, levels
    if ads.is_ads:
        n, k, lam, _ = ads.parameters
        if acf.levels != [n - 4 * (k - lam), n - 4 * (k - lam - 1)]:
            return False, levels
    return True, levels


def test_criterion_7_three_level_equivalence(order4):
    failures = []
    checked_hits = 0
    for x in order4["result"]["primes"]:
        ctx = build_context(x["p"], 4)
        for h in x["hits"]:
            support = build_dhm_support(ctx, h["I"], h["J"], h["variant"])
            ok, _ = _acf_agrees(support)
            checked_hits += 1
            if not ok:
                failures.append((x["p"], h["I"], h["J"], h["variant"]))

    rng = random.Random(RANDOM_SEED)
    random_ads = raw_three_not_ads = 0
    for _ in range(200):
        n = rng.randint(4, 100)
        k = rng.randint(1, n - 1)
        support = SupportSet.cyclic(n, rng.sample(range(n), k))
        ok, levels = _acf_agrees(support)
        random_ads += classify_ads(support).is_ads
        raw_three_not_ads += levels.count == 3 and not levels.three_level
        if not ok:
            failures.append(("random", n, sorted(support.members)))
    verdict(
        7, not failures,
        f"{checked_hits} sweep hits + 200 random supports ({random_ads} ADS); "
        f"{raw_three_not_ads} random supports have 3 raw values with a non-adjacent gap; failures={failures[:3]}",
    )


def test_criterion_8_determinism(sweep_10000, order4):
    single = [
        reports.dumps(reports.verify_formulas_report(13, 2000, jobs=1)),
        reports.dumps(sweep_10000[0]),
        reports.dumps(sweep_10000[1]),
        reports.dumps(order4),
        reports.dumps(reports.fast_path_report(13, 200, jobs=1)),
    ]
    eight = [
        reports.dumps(reports.verify_formulas_report(13, 2000, jobs=8)),
        reports.dumps(reports.search_report(13, 10000, d=6, mixed=True, jobs=8)),
        reports.dumps(reports.search_report(13, 10000, d=6, mixed=False, jobs=8)),
        reports.dumps(reports.search_report(5, 100, d=4, jobs=8)),
        reports.dumps(reports.fast_path_report(13, 200, jobs=8)),
    ]
    same = [a == b for a, b in zip(single, eight)]
    verdict(8, all(same), f"reports identical for jobs 1 and 8: {same}")
