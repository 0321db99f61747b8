from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwasawa_gate.arith import primes_up_to
from iwasawa_gate.arith.finite import GF
from iwasawa_gate.curve import (
    INFINITY,
    BadReductionError,
    CurvePoint,
    SingularCurveError,
    WeierstrassCurve,
    count_points,
    division_polynomial,
    halve_point,
    ordinary_or_supersingular,
    psi2_squared,
    torsion_subgroup,
    trace_of_frobenius,
    two_torsion_points,
)
from iwasawa_gate.curve import polynomials as P
from iwasawa_gate.quadfield import QuadraticField

LABELS = ("15a1", "15a3")
GOOD_ODD = [p for p in primes_up_to(2000) if p not in (2, 3, 5)]


def curve(label: str) -> WeierstrassCurve:
    return WeierstrassCurve.from_label(label)


# invariants

def test_j_invariants(E1, E2):
    assert E1.j == Fraction(111284641, 50625)
    assert E2.j == Fraction(13997521, 225)
    assert E1.discriminant == 50625 and E2.discriminant == 225
    assert WeierstrassCurve(0, 0, 0, 0, 1).j == 0


def test_singular_model_rejected():
    with pytest.raises(SingularCurveError):
        WeierstrassCurve(0, 0, 0, 0, 0)
    with pytest.raises(SingularCurveError):
        WeierstrassCurve(0, 0, 0, -3, 2)


# group law over F_p

def _random_fp_point(E, p, rng):
    F = GF(p)
    while True:
        pts = E.lift_x(F.coerce(rng.randrange(p)))
        if pts:
            return rng.choice(pts)


@pytest.mark.parametrize("label", LABELS)
@pytest.mark.parametrize("p", [7, 11, 101])
def test_group_axioms_over_fp(label, p):
    E = curve(label).reduce(p)
    rng = random.Random(p)
    for _ in range(100):
        A, B, C = (_random_fp_point(E, p, rng) for _ in range(3))
        assert E.add(E.add(A, B), C) == E.add(A, E.add(B, C))
        assert E.add(A, B) == E.add(B, A)
        assert E.add(A, INFINITY) == A
        assert E.add(A, E.negate(A)) == INFINITY


def test_identity_and_inverse_over_q(E1):
    P0 = torsion_subgroup(E1).generators[1]
    assert E1.add(P0, INFINITY) == P0
    assert E1.add(P0, E1.negate(P0)) == INFINITY


def test_rational_order_four_point_on_e2(E2):
    # (-2, 3) does not lie on this model, so the order-4 point comes from the torsion search
    assert not E2.is_on_curve(CurvePoint(Fraction(-2), Fraction(3)))
    T = torsion_subgroup(E2)
    g = T.generators[1]
    assert E2.multiply(2, g) != INFINITY
    assert E2.multiply(4, g) == INFINITY
    assert E2.order(g) == 4


# point counting

def test_small_counts(E1, E2):
    assert count_points(E1, 7) == 8
    assert count_points(E2, 7) == 8
    assert count_points(WeierstrassCurve(0, 0, 0, 1, 0), 3) == 4


def test_trace_and_type(E1):
    assert trace_of_frobenius(E1, 7) == 0
    assert ordinary_or_supersingular(E1, 7) == "supersingular"
    assert trace_of_frobenius(E1, 17) == 2
    assert ordinary_or_supersingular(E1, 17) == "ordinary"


def test_counting_preconditions(E1):
    with pytest.raises(ValueError):
        count_points(E1, 2)
    with pytest.raises(BadReductionError):
        count_points(E1, 5)
    with pytest.raises(BadReductionError):
        trace_of_frobenius(E1, 3)


def _enumerate(E: WeierstrassCurve, p: int) -> int:
    """Independent oracle: test every (x, y) pair."""
    a1, a2, a3, a4, a6 = (int(a) % p for a in E.ainvs)
    return 1 + sum(
        1 for x in range(p) for y in range(p)
        if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0
    )


@pytest.mark.parametrize("label", LABELS)
def test_counts_match_pair_enumeration(label):
    E = curve(label)
    for p in GOOD_ODD[:25]:
        assert count_points(E, p) == _enumerate(E, p)


@pytest.mark.parametrize("label", LABELS)
def test_naive_and_bsgs_agree(label):
    E = curve(label)
    for p in GOOD_ODD:
        assert count_points(E, p, "naive") == count_points(E, p, "bsgs"), p


@pytest.mark.parametrize("label", LABELS)
def test_eight_divides_and_p_does_not(label):
    E = curve(label)
    for p in (q for q in GOOD_ODD if q < 1000):
        N = count_points(E, p)
        assert N % 8 == 0 and N % p != 0, p


# division polynomials

def test_division_polynomial_base_cases(E1):
    inv = E1.invariants()
    assert division_polynomial(E1, 1) == (1,)
    assert psi2_squared(E1) == P.trim((inv.b6, 2 * inv.b4, inv.b2, 4))


@pytest.mark.parametrize("n", range(1, 16, 2))
def test_odd_division_polynomial_degree(E1, n):
    assert P.degree(division_polynomial(E1, n)) == (n * n - 1) // 2


def test_psi4_vanishes_at_four_torsion(E1):
    four = [Q for Q in _all_torsion(E1) if not Q.is_infinity and E1.order(Q) == 4]
    assert len(four) == 4
    f4 = division_polynomial(E1, 4)
    for Q in four:
        assert P.evaluate(f4, Q.x) == 0


def _all_torsion(E, K=None):
    T = torsion_subgroup(E, K)
    EK = E if K is None else E.base_change(QuadraticField(K))
    g1, g2 = T.generators
    return {EK.add(EK.multiply(i, g1), EK.multiply(j, g2)) for i in range(T.n1) for j in range(T.n2)}


# halving and torsion

def test_halving_infinity_gives_two_torsion(E1):
    halves = halve_point(E1, INFINITY)
    assert halves == {INFINITY, *two_torsion_points(E1)}
    assert len(halves) == 4


@pytest.mark.parametrize("label", LABELS)
def test_no_order_four_point_halves_over_q(label):
    E = curve(label)
    for Q in _all_torsion(E):
        if not Q.is_infinity and E.order(Q) == 4:
            assert halve_point(E, Q) == set()


def test_order_eight_point_over_q_sqrt5(E1):
    K = QuadraticField(5)
    EK = E1.base_change(K)
    halves = set()
    for Q in _all_torsion(E1):
        if not Q.is_infinity and E1.order(Q) == 4:
            halves |= halve_point(E1, Q, K)
    assert halves
    for R in halves:
        assert EK.order(R) == 8


@pytest.mark.parametrize("d", [5, 2, 21])
def test_halving_routes_agree(E1, d):
    K = QuadraticField(d)
    for Q in _all_torsion(E1):
        assert halve_point(E1, Q, K, method="formula") == halve_point(E1, Q, K, method="quartic")


@pytest.mark.parametrize("label,d,expected", [
    ("15a1", None, (2, 4)), ("15a3", None, (2, 4)),
    ("15a1", 5, (2, 8)), ("15a3", 5, (2, 8)),
    ("15a1", 2, (2, 4)),
])
def test_torsion_structures(label, d, expected):
    T = torsion_subgroup(curve(label), d)
    assert T.invariants == expected
    assert str(T) == " x ".join(f"Z/{n}" for n in expected)


def test_torsion_on_control_curves():
    assert torsion_subgroup(WeierstrassCurve(0, 0, 0, 0, 1)).invariants == (6,)
    assert torsion_subgroup(WeierstrassCurve(0, 0, 1, -1, 0)).invariants == ()
    assert torsion_subgroup(WeierstrassCurve(0, -1, 1, -10, -20)).invariants == (5,)


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(LABELS), st.sampled_from([2, 3, 5, 6, 7, 10, 13, 17, 21, 29, 53, 61, 65, 69, 77]))
def test_torsion_functorial_and_generators_annihilated(label, d):
    E = curve(label)
    TK = torsion_subgroup(E, d)
    TQ = torsion_subgroup(E)
    EK = E.base_change(QuadraticField(d))
    assert TK.order % TQ.order == 0
    over_k = _all_torsion(E, d)
    for Q in _all_torsion(E):
        assert Q.is_infinity or EK.point(Q.x, Q.y) in over_k
    for g in TK.generators:
        assert EK.multiply(TK.n1 * TK.n2, g) == INFINITY
