from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwasawa_gate.arith import primes_up_to
from iwasawa_gate.curve import WeierstrassCurve, count_points, torsion_subgroup
from iwasawa_gate.iwasawa import (
    INCOMPLETE,
    INCONCLUSIVE,
    LAMBDA_ZERO,
    MULTIPLICATIVE_CASE,
    ORDINARY_CASE,
    SUPERSINGULAR_CASE,
    AssumptionViolation,
    CaseClassification,
    GreenbergInputs,
    LvFactor,
    classify_case,
    gl2_order,
    gl2_order_bruteforce,
    greenberg_multiplicative,
    greenberg_ordinary,
    hasse_obstruction,
    hasse_window_excludes,
    gl2_divisibility_check,
    lv_factor,
    torsion_stability,
)
from iwasawa_gate.localred import NONSPLIT_MULTIPLICATIVE, SPLIT_MULTIPLICATIVE, local_data
from iwasawa_gate.quadfield import QuadraticField, splitting_type

GOOD_ODD = [p for p in primes_up_to(1000) if p not in (2, 3, 5)]


# case classification

def test_case_examples(E1):
    c = classify_case(E1, 2, 7)
    assert (c.case, c.a_p, c.hypothesis_ok) == (SUPERSINGULAR_CASE, 0, True)
    c = classify_case(E1, 21, 5)
    assert c.case == MULTIPLICATIVE_CASE and {r.kind for r in c.places} == {SPLIT_MULTIPLICATIVE}
    c = classify_case(E1, 2, 17)
    assert (c.case, c.a_p) == (ORDINARY_CASE, 2)


@pytest.mark.parametrize("d,p", [(2, 5), (5, 5), (2, 2)])
def test_non_split_primes_rejected(E1, d, p):
    with pytest.raises(AssumptionViolation):
        classify_case(E1, d, p)


@pytest.mark.parametrize("label", ["15a1", "15a3"])
@pytest.mark.parametrize("d,p", [(2, 7), (21, 5), (2, 17), (61, 3), (53, 11)])
def test_case_invariant_under_place_swap(label, d, p):
    E = WeierstrassCurve.from_label(label)
    c = classify_case(E, d, p)
    swapped = CaseClassification(c.case, c.p, c.d, tuple(reversed(c.places)), c.a_p)
    assert {(r.kind, r.tamagawa) for r in swapped.places} == {(r.kind, r.tamagawa) for r in c.places}
    assert len({(r.kind, r.tamagawa, r.disc_valuation) for r in c.places}) == 1


# Greenberg formulas

def test_ordinary_pipeline_example(E1):
    p = 17
    tam = [r.tamagawa for r in local_data(E1, 2)]
    counts = [count_points(E1, p)] * len(splitting_type(QuadraticField(2), p))
    torsion = torsion_subgroup(E1, 2).order
    res = greenberg_ordinary(GreenbergInputs(tam, torsion, 1, counts), p)
    assert res.valuation == 0 and res.lambda_conclusion == LAMBDA_ZERO
    assert res.valuation == sum(t.contribution for t in res.terms)


def test_synthetic_ordinary_inputs():
    assert greenberg_ordinary(GreenbergInputs([1, 2], 8, 1, [8, 8]), 7).valuation == 0
    res = greenberg_ordinary(GreenbergInputs([1], 8, 49, [8]), 7)
    assert res.valuation == 2 and res.lambda_conclusion == INCONCLUSIVE


def test_missing_selmer_is_incomplete():
    res = greenberg_ordinary(GreenbergInputs([2], 8, None, [8]), 7)
    assert res.valuation is None and res.lambda_conclusion == INCOMPLETE
    assert res.missing == ("selmer_order",)


def test_synthetic_multiplicative_inputs():
    v = splitting_type(QuadraticField(21), 5)[0]
    lv = [LvFactor(v, SPLIT_MULTIPLICATIVE, 1), LvFactor(v, NONSPLIT_MULTIPLICATIVE, 0, 2)]
    res = greenberg_multiplicative(GreenbergInputs([2, 4], 8, 1, lv_factors=lv), 5)
    assert res.valuation == 1 and res.lambda_conclusion == INCONCLUSIVE


@given(
    st.sampled_from([3, 5, 7, 11, 17]),
    st.lists(st.integers(1, 10**6), min_size=1, max_size=6),
    st.lists(st.integers(1, 10**6), max_size=4),
    st.randoms(use_true_random=False),
)
def test_greenberg_is_order_independent(p, tam, counts, rng):
    base = greenberg_ordinary(GreenbergInputs(tam, 1, p**10, counts), p)
    tam2, counts2 = list(tam), list(counts)
    rng.shuffle(tam2)
    rng.shuffle(counts2)
    shuffled = greenberg_ordinary(GreenbergInputs(tam2, 1, p**10, counts2), p)
    assert base.valuation == shuffled.valuation
    assert base.valuation == sum(t.contribution for t in base.terms)


def test_multiplicative_pipeline_examples(E1, E2):
    for E, d, p in ((E1, 21, 5), (E2, 61, 3)):
        K = QuadraticField(d)
        lv = [lv_factor(E, K, p, v) for v in splitting_type(K, p)]
        tam = [r.tamagawa for r in local_data(E, d)]
        res = greenberg_multiplicative(GreenbergInputs(tam, torsion_subgroup(E, d).order, 1, lv_factors=lv), p)
        assert res.valuation == 0 and res.lambda_conclusion == LAMBDA_ZERO


# l_v factors

@pytest.mark.parametrize("label,d", [("15a1", 21), ("15a3", 69)])
def test_split_lv_factor(label, d):
    E = WeierstrassCurve.from_label(label)
    for v in splitting_type(QuadraticField(d), 5):
        f = lv_factor(E, d, 5, v)
        assert f.ratio_valuation == 1 and f.valuation == 0
        assert f.precisions == (40, 80)


@pytest.mark.parametrize("label", ["15a1", "15a3"])
def test_nonsplit_lv_factor(label):
    E = WeierstrassCurve.from_label(label)
    for v in splitting_type(QuadraticField(61), 3):
        f = lv_factor(E, 61, 3, v)
        assert (f.kind, f.value, f.valuation) == (NONSPLIT_MULTIPLICATIVE, 2, 0)


def test_lv_factor_rejects_non_split_place(E1):
    v = splitting_type(QuadraticField(2), 5)[0]
    with pytest.raises(AssumptionViolation):
        lv_factor(E1, 2, 5, v)


# Hasse obstruction

def test_hasse_examples(E1, E2):
    cert = hasse_obstruction(E1, 7)
    assert cert.holds and cert.count == 8
    assert hasse_obstruction(E2, 17).holds
    assert hasse_window_excludes(8, 3) and 24 > 3 + 1 + 2 * math.sqrt(3)


@pytest.mark.parametrize("label", ["15a1", "15a3"])
def test_hasse_paths_agree(label):
    E = WeierstrassCurve.from_label(label)
    for p in GOOD_ODD:
        cert = hasse_obstruction(E, p)
        assert cert.direct == cert.window == True, p


@given(st.integers(1, 50), st.sampled_from(primes_up_to(500)[1:]))
def test_window_check_matches_floating_point(t, p):
    assert hasse_window_excludes(t, p) == (t * p > p + 1 + 2 * math.sqrt(p))


# GL2 arithmetic

def test_gl2_examples():
    assert gl2_order(3) == 48
    assert gl2_order(5) == 480 == gl2_order_bruteforce(5)


@pytest.mark.parametrize("l", [2, 3, 5, 7])
def test_gl2_formula_matches_enumeration(l):
    assert gl2_order(l) == gl2_order_bruteforce(l)


def test_gl2_divisibility_examples():
    rec = gl2_divisibility_check(7, 5)
    assert rec.certified and rec.target == 48 and rec.odd_part == 3
    # l = 3 gives 8, which needs 2 * p^n to carry 2^3: never
    assert gl2_divisibility_check(3, 3).certified


def test_gl2_divisibility_all_small_pairs():
    odd = primes_up_to(97)[1:]
    assert all(gl2_divisibility_check(l, p).certified for l in odd for p in odd)


# torsion stability

def test_torsion_stability_examples(E1, E2):
    rec = torsion_stability(E1, 2, 7)
    assert rec.certified and str(rec.torsion_k) == "Z/2 x Z/4"
    assert torsion_stability(E2, 53, 11).certified
    with pytest.raises(AssumptionViolation):
        torsion_stability(E1, 2, 2)
