from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwasawa_gate.arith import is_squarefree, primes_up_to
from iwasawa_gate.quadfield import (
    INERT,
    RAMIFIED,
    SPLIT,
    QuadraticField,
    local_degrees,
    residue_map,
    splitting_type,
)

SQUAREFREE = [d for d in range(2, 200) if is_squarefree(d)]


def test_splitting_examples():
    assert [v.splitting for v in splitting_type(QuadraticField(2), 7)] == [SPLIT, SPLIT]
    assert [v.splitting for v in splitting_type(QuadraticField(5), 5)] == [RAMIFIED]
    assert [v.splitting for v in splitting_type(QuadraticField(2), 5)] == [INERT]


def test_invalid_fields_rejected():
    for d in (0, 1, 4, 12, -3):
        with pytest.raises(ValueError):
            QuadraticField(d)


@pytest.mark.parametrize("d", SQUAREFREE)
def test_efg_identity(d):
    K = QuadraticField(d)
    for p in primes_up_to(100):
        primes = splitting_type(K, p)
        v = primes[0]
        assert len(primes) * v.e * v.f == 2
        assert (v.splitting == RAMIFIED) == (K.discriminant % p == 0)
        if p > 2 and v.splitting != RAMIFIED:
            brute = any((x * x - d) % p == 0 for x in range(p))
            assert (v.splitting == SPLIT) == brute


def test_residue_map_examples():
    K2, K5 = QuadraticField(2), QuadraticField(5)
    v7 = next(v for v in splitting_type(K2, 7) if v.root() == 3)
    assert int(residue_map(K2.element(3), v7)) == 3
    assert int(residue_map(K2.sqrt_d, v7)) == 3
    v11 = next(v for v in splitting_type(K5, 11) if v.root() == 4)
    assert int(residue_map(K5.element(Fraction(1, 2), Fraction(1, 2)), v11)) == 8


def test_residue_map_rejects_non_integral():
    K = QuadraticField(2)
    v = splitting_type(K, 7)[0]
    with pytest.raises(ValueError):
        residue_map(K.element(Fraction(1, 7), 1), v)


@pytest.mark.parametrize("d,p", [(2, 7), (2, 17), (5, 11), (21, 5), (77, 13), (61, 3)])
def test_residue_map_is_a_ring_homomorphism(d, p):
    K = QuadraticField(d)
    rng = random.Random(d * 1000 + p)
    for v in splitting_type(K, p):
        for _ in range(50):
            x = K.element(rng.randint(-99, 99), rng.randint(-99, 99))
            y = K.element(rng.randint(-99, 99), rng.randint(-99, 99))
            assert residue_map(x + y, v) == residue_map(x, v) + residue_map(y, v)
            assert residue_map(x * y, v) == residue_map(x, v) * residue_map(y, v)
            assert residue_map(x, v) * residue_map(x.conjugate(), v) == residue_map(x.norm(), v)


def test_local_degrees():
    assert local_degrees(QuadraticField(2), splitting_type(QuadraticField(2), 7)[0]) == (1, 1)
    assert local_degrees(QuadraticField(2), splitting_type(QuadraticField(2), 5)[0]) == (2, 1)
    v = splitting_type(QuadraticField(5), 5)[0]
    assert local_degrees(QuadraticField(5), v) == (1, 1) and v.e * v.f == 2


@given(st.sampled_from(SQUAREFREE), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_field_arithmetic(d, a, b, c, e):
    K = QuadraticField(d)
    x, y = K.element(a, b), K.element(c, e)
    assert (x * y).norm() == x.norm() * y.norm()
    if x != 0:
        assert x * x.inverse() == 1
    r = K.sqrt(x * x)
    assert r is not None and r * r == x * x
