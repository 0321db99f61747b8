from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwasawa_gate.arith import PadicNumber, is_squarefree, padic_valuation
from iwasawa_gate.curve import WeierstrassCurve
from iwasawa_gate.localred import (
    GOOD,
    NONSPLIT_MULTIPLICATIVE,
    SPLIT_MULTIPLICATIVE,
    AdditiveReductionError,
    LocalReductionData,
    NotSplitMultiplicativeError,
    conductor,
    j_expansion_coefficients,
    j_of_q,
    local_data,
    minimal_model_at,
    reduction_type,
    tamagawa_product,
    tate_period,
)
from iwasawa_gate.quadfield import SPLIT, QuadraticField, splitting_type

SQUAREFREE = [d for d in range(2, 200) if is_squarefree(d)]


def test_minimal_models(E1, E2):
    F, T = minimal_model_at(E1, 5)
    assert F == E1 and T.u == 1 and padic_valuation(F.discriminant, 5) == 4
    F, T = minimal_model_at(E2, 3)
    assert F == E2 and padic_valuation(F.discriminant, 3) == 2


@pytest.mark.parametrize("p", [2, 3, 5])
def test_non_minimal_model_is_reduced(p):
    F, T = minimal_model_at(WeierstrassCurve(0, 0, 0, 0, p**6), p)
    assert F.ainvs == (0, 0, 0, 0, 1)
    assert T.u == p


def test_scaled_model_recovers_minimal_discriminant(E1):
    scaled = E1.change_coordinates(Fraction(1, 5), 0, 0, 0)
    assert padic_valuation(scaled.discriminant, 5) == 16
    F, _ = minimal_model_at(scaled, 5)
    assert padic_valuation(F.discriminant, 5) == 4


def test_reduction_types_over_q(E1, E2):
    assert reduction_type(E1, 5) == LocalReductionData(5, SPLIT_MULTIPLICATIVE, 4, 4)
    assert reduction_type(E1, 7) == LocalReductionData(7, GOOD, 1, 0)
    assert reduction_type(E1, 3) == LocalReductionData(3, NONSPLIT_MULTIPLICATIVE, 2, 4)
    assert reduction_type(E2, 5).kind == SPLIT_MULTIPLICATIVE
    assert reduction_type(E2, 3).kind == NONSPLIT_MULTIPLICATIVE
    assert conductor(E1) == conductor(E2) == 15


def test_invalid_local_data_rejected():
    with pytest.raises(ValueError):
        LocalReductionData(5, SPLIT_MULTIPLICATIVE, 2, 4)
    with pytest.raises(ValueError):
        LocalReductionData(3, NONSPLIT_MULTIPLICATIVE, 1, 4)


def test_additive_reduction_rejected():
    with pytest.raises(AdditiveReductionError):
        reduction_type(WeierstrassCurve(0, 0, 0, -1, 0), 2)


def _count_with_node(E: WeierstrassCurve, p: int) -> int:
    a1, a2, a3, a4, a6 = (int(a) % p for a in E.ainvs)
    return 1 + sum(
        1 for x in range(p) for y in range(p)
        if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0
    )


@pytest.mark.parametrize("ainvs,p", [
    ((1, 1, 1, -10, -10), 3), ((1, 1, 1, -10, -10), 5),
    ((1, 1, 1, -5, 2), 3), ((1, 1, 1, -5, 2), 5),
    ((0, -1, 1, -10, -20), 11), ((0, 0, 1, -1, 0), 37),
    ((1, 0, 1, 4, -6), 2), ((1, 0, 1, 4, -6), 7),
    ((1, 0, 0, -4, -1), 3), ((1, 0, 0, -4, -1), 7),
])
def test_split_test_against_point_count(ainvs, p):
    # a nodal cubic over F_p has p points when the node is split, p + 2 otherwise
    E = WeierstrassCurve(*ainvs)
    data = reduction_type(E, p)
    expected = p if data.kind == SPLIT_MULTIPLICATIVE else p + 2
    assert data.is_multiplicative
    assert _count_with_node(minimal_model_at(E, p)[0], p) == expected


def test_tamagawa_examples(E1, E2):
    assert tamagawa_product(E1) == (8, True)
    assert tamagawa_product(E2) == (4, True)
    assert tamagawa_product(E1, 2).product == 16
    assert tamagawa_product(E2, 61).product == 16


@pytest.mark.parametrize("label", ["15a1", "15a3"])
def test_tamagawa_power_of_two_for_all_small_fields(label):
    E = WeierstrassCurve.from_label(label)
    for d in SQUAREFREE:
        assert tamagawa_product(E, d).is_power_of_two, d


@pytest.mark.parametrize("label", ["15a1", "15a3"])
@pytest.mark.parametrize("d", [61, 31, 19, 79])
def test_split_places_repeat_rational_data(label, d):
    E = WeierstrassCurve.from_label(label)
    K = QuadraticField(d)
    for ell in (3, 5):
        primes = splitting_type(K, ell)
        if primes[0].splitting != SPLIT:
            continue
        q_level = reduction_type(E, ell)
        for v in primes:
            data = reduction_type(E, v, K)
            assert (data.kind, data.tamagawa) == (q_level.kind, q_level.tamagawa)
        prod = 1
        for r in local_data(E, d):
            if r.prime == ell:
                prod *= r.tamagawa
        assert prod == q_level.tamagawa**2


@pytest.mark.parametrize("label", ["15a1", "15a3"])
def test_identical_local_data_gives_identical_products(label):
    # 3 ramifies and 5 splits in Q(sqrt 6), Q(sqrt 21) and Q(sqrt 69)
    E = WeierstrassCurve.from_label(label)
    shapes = {d: tuple(v.splitting for ell in (3, 5) for v in splitting_type(QuadraticField(d), ell)) for d in (6, 21, 69)}
    assert len(set(shapes.values())) == 1
    assert tamagawa_product(E, 6) == tamagawa_product(E, 21) == tamagawa_product(E, 69)


def test_j_expansion_coefficients():
    c = j_expansion_coefficients(5)
    assert c[:3] == (1, 744, 196884)
    assert c[3:] == (21493760, 864299970)


@pytest.mark.parametrize("label,valuation", [("15a1", 4), ("15a3", 2)])
def test_tate_period(label, valuation):
    E = WeierstrassCurve.from_label(label)
    T = tate_period(E, 5, 40)
    n = T.valuation
    assert n == valuation == -padic_valuation(E.j, 5)
    assert T.q.agrees_with(PadicNumber.from_rational(1 / Fraction(E.j), 5, 60), 2 * n)
    back = j_of_q(T.q, j_expansion_coefficients(T.terms))
    assert back.agrees_with(PadicNumber.from_rational(E.j, 5, 60), T.j_digits - n)
    assert T.j_digits >= 40 - 2 * n


def test_tate_period_precision_doubling(E1):
    lo, hi = tate_period(E1, 5, 40), tate_period(E1, 5, 80)
    assert hi.q.agrees_with(lo.q)
    assert lo.valuation == hi.valuation


def test_tate_period_rejects_other_places(E1):
    with pytest.raises(NotSplitMultiplicativeError):
        tate_period(E1, 3)
    with pytest.raises(NotSplitMultiplicativeError):
        tate_period(E1, 7)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["15a1", "15a3"]), st.sampled_from(SQUAREFREE))
def test_local_data_invariants_over_k(label, d):
    E = WeierstrassCurve.from_label(label)
    for r in local_data(E, d):
        q_level = reduction_type(E, r.prime)
        e = r.place.e
        assert r.disc_valuation == e * q_level.disc_valuation
