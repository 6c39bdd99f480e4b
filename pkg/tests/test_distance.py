import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclo6.ads_search import index_sets
from cyclo6.distance import (
    C,
    C_PRIME,
    DistanceSpectrum,
    SupportSet,
    as_index_set,
    build_dhm_support,
    class_distance,
    class_representative,
    dC_decomposed,
    dC_direct,
    dCprime_correction,
    d_I_oracle,
    d_IJ_oracle,
    difference_function,
    shift_counts,
    spectrum,
)
from cyclo6.field_core import build_context
from conftest import PRIMES_12

I0, J0 = (0, 1, 2), (0, 4, 5)
QR13 = SupportSet.cyclic(13, [1, 3, 4, 9, 10, 12])


def brute_spectrum(D):
    hist = {}
    for e in D.shifts():
        v = sum(1 for x in D.members if D.add(x, e) in D.members)
        hist[v] = hist.get(v, 0) + 1
    return DistanceSpectrum.from_counts(hist)


def test_difference_function_examples(ctx13):
    assert difference_function(QR13, 1) == 2
    assert difference_function(SupportSet.cyclic(4, [0, 1]), 2) == 0
    assert difference_function(build_dhm_support(ctx13, I0, J0), (1, 0)) == 4


def test_difference_function_rejects_identity(ctx13):
    with pytest.raises(ValueError):
        difference_function(QR13, 0)
    with pytest.raises(ValueError):
        difference_function(QR13, 13)
    with pytest.raises(ValueError):
        difference_function(build_dhm_support(ctx13, I0, J0), (0, 0))


def test_spectrum_examples():
    assert spectrum(QR13).histogram == {2: 6, 3: 6}
    assert spectrum(SupportSet.cyclic(5, [1])).histogram == {0: 4}
    assert spectrum(SupportSet.cyclic(7, range(1, 7))).histogram == {5: 6}


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 40).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n - 1)))))
def test_spectrum_matches_brute_cyclic(case):
    n, members = case
    D = SupportSet.cyclic(n, members)
    spec = spectrum(D)
    assert spec == brute_spectrum(D)
    assert spec.total == n - 1
    assert spec.mass == len(D) ** 2 - len(D)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5, 7, 11, 13]).flatmap(
    lambda p: st.tuples(st.just(p), st.sets(st.tuples(st.integers(0, 1), st.integers(0, p - 1))))))
def test_spectrum_matches_brute_product(case):
    p, members = case
    D = SupportSet.product(p, members)
    assert spectrum(D) == brute_spectrum(D)
    assert spectrum(D).mass == len(D) ** 2 - len(D)


def test_spectrum_merge_is_histogram_addition():
    a = DistanceSpectrum.from_counts({1: 2, 3: 1})
    b = DistanceSpectrum.from_counts({1: 1, 2: 4})
    assert (a + b).histogram == {1: 3, 2: 4, 3: 1} == (b + a).histogram


def test_build_support_p13(ctx13):
    S = build_dhm_support(ctx13, I0, J0, C)
    assert len(S) == 12
    assert {x for a, x in S.members if a == 0} == {1, 2, 4, 9, 11, 12}
    assert {x for a, x in S.members if a == 1} == {1, 3, 6, 7, 10, 12}
    Sp = build_dhm_support(ctx13, I0, J0, C_PRIME)
    assert len(Sp) == 13 and (0, 0) in Sp.members and Sp.origin_included
    with pytest.raises(ValueError):
        build_dhm_support(ctx13, (), J0)
    with pytest.raises(ValueError):
        build_dhm_support(ctx13, range(6), J0)
    with pytest.raises(ValueError):
        build_dhm_support(ctx13, I0, J0, "D")


def test_as_index_set():
    assert as_index_set([2, 0, 2], 6) == (0, 2)
    with pytest.raises(ValueError):
        as_index_set([6], 6)


def test_decomposed_examples(ctx13):
    assert dC_decomposed(ctx13, I0, J0, 1, 0) == 4
    w = class_representative(ctx13, 0)
    assert d_I_oracle(ctx13, I0, w) == 2 and d_I_oracle(ctx13, J0, w) == 1
    assert dC_decomposed(ctx13, I0, J0, 0, w) == 3
    assert dC_decomposed(ctx13, I0, J0, 0, 0) == 12


def test_correction_examples(ctx13):
    assert dCprime_correction(ctx13, I0, J0, 0, 1) == 2
    assert dCprime_correction(ctx13, I0, J0, 0, 8) == 0
    assert dCprime_correction(ctx13, I0, J0, 1, 0) == 0


def test_d_IJ_examples(ctx13):
    assert d_IJ_oracle(ctx13, I0, J0, 1) == 3
    assert d_IJ_oracle(ctx13, J0, I0, 1) == 3
    assert d_IJ_oracle(ctx13, I0, I0, 1) == 2
    with pytest.raises(ValueError):
        d_IJ_oracle(ctx13, I0, J0, 13)


@pytest.mark.parametrize("p", PRIMES_12)
def test_decomposition_equivalence(p):
    ctx = build_context(p, 6)
    direct = shift_counts(build_dhm_support(ctx, I0, J0, C))
    for w1, w2 in product((0, 1), range(p)):
        assert direct[w1, w2] == dC_decomposed(ctx, I0, J0, w1, w2)


@pytest.mark.parametrize("p", PRIMES_12[:6])
def test_cprime_is_c_plus_correction(p):
    ctx = build_context(p, 6)
    rng = random.Random(p)
    subsets = index_sets(6)
    for _ in range(10):
        I, J = rng.choice(subsets), rng.choice(subsets)
        base = shift_counts(build_dhm_support(ctx, I, J, C))
        primed = shift_counts(build_dhm_support(ctx, I, J, C_PRIME))
        for w1, w2 in product((0, 1), range(p)):
            if (w1, w2) == (0, 0):
                continue
            assert primed[w1, w2] == dC_decomposed(ctx, I, J, w1, w2) + dCprime_correction(ctx, I, J, w1, w2)
            assert base[w1, w2] == dC_decomposed(ctx, I, J, w1, w2)


@pytest.mark.parametrize("p", PRIMES_12[:6])
def test_correction_membership_form(p):
    # with f even, -1 lies in D_0, so w2 and -w2 share a class
    ctx = build_context(p, 6)
    for I in index_sets(6):
        for w2 in range(1, p):
            assert dCprime_correction(ctx, I, I, 0, w2) == 2 * (ctx.cls(w2) in I)


@pytest.mark.parametrize("p", PRIMES_12[:5])
def test_class_constancy(p):
    ctx = build_context(p, 6)
    for I in [I0, J0, (1,), (0, 3), (1, 2, 4, 5)]:
        per_class = {}
        for w in range(1, p):
            per_class.setdefault(ctx.inverse_class(w), set()).add(d_I_oracle(ctx, I, w))
        assert all(len(v) == 1 for v in per_class.values())
        for h, vals in per_class.items():
            assert vals == {class_distance(ctx, I, I, h)}


@pytest.mark.parametrize("p", PRIMES_12)
def test_symmetry_all_pairs(p):
    ctx = build_context(p, 6)
    subsets = index_sets(6)
    for h in range(6):
        w = class_representative(ctx, h)
        assert ctx.inverse_class(w) == h
        for I, J in product(subsets, repeat=2):
            assert class_distance(ctx, I, J, h) == class_distance(ctx, J, I, h)
    # and on the direct route for the canonical pair
    for w in range(1, p):
        assert d_IJ_oracle(ctx, I0, J0, w) == d_IJ_oracle(ctx, J0, I0, w)


def test_dC_direct_zero_shift(ctx13):
    assert dC_direct(ctx13, I0, J0, 0, 0) == 12
    assert dC_direct(ctx13, I0, J0, 0, 0, C_PRIME) == 13
