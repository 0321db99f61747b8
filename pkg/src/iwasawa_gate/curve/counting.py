"""Point counting over F_p and the ordinary/supersingular classification.

Two independent counting routes:

* ``naive``: N = p + 1 + sum_x legendre(4x^3 + b2x^2 + 2b4x + b6), by a table
  of squares mod p.
* ``bsgs``: the group structure Z/n1 x Z/n2 is recovered from random points.
  Baby-step giant-step finds point orders inside the Hasse interval.  Random
  orders are merged into an element whose order is the exponent n2.  Then n1
  is the largest order of a random point in E(F_p)/<that element>, found by
  baby-step giant-step membership tests.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from ..arith.finite import sqrt_mod
from ..arith.integers import factorize, is_prime
from .weierstrass import WeierstrassCurve

NAIVE_LIMIT = 2000
MAX_P = 10**6

ORDINARY, SUPERSINGULAR = "ordinary", "supersingular"


class BadReductionError(ValueError):
    pass


def _reduce_ainvs(E: WeierstrassCurve, p: int) -> tuple[int, ...]:
    if not E.is_rational():
        raise ValueError("point counting needs a model over Q")
    out = []
    for a in E.ainvs:
        a = Fraction(a)
        if a.denominator % p == 0:
            raise BadReductionError(f"model is not {p}-integral")
        out.append(a.numerator * pow(a.denominator, -1, p) % p)
    disc = Fraction(E.discriminant)
    if disc.denominator % p == 0 or disc.numerator % p == 0:
        raise BadReductionError(f"bad reduction at {p} for this model")
    return tuple(out)


class _FpCurve:
    """Integer-tuple arithmetic on a curve over F_p; None is the point at infinity."""

    def __init__(self, ainvs: tuple[int, ...], p: int):
        self.a1, self.a2, self.a3, self.a4, self.a6 = ainvs
        self.p = p

    def rhs(self, x: int) -> int:
        a1, a2, a3, a4, a6, p = self.a1, self.a2, self.a3, self.a4, self.a6, self.p
        b2, b4, b6 = a1 * a1 + 4 * a2, a1 * a3 + 2 * a4, a3 * a3 + 4 * a6
        return (4 * x * x * x + b2 * x * x + 2 * b4 * x + b6) % p

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        return (x, (-y - self.a1 * x - self.a3) % self.p)

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2 + self.a1 * x2 + self.a3) % p == 0:
                return None
            den = (2 * y1 + self.a1 * x1 + self.a3) % p
            lam = (3 * x1 * x1 + 2 * self.a2 * x1 + self.a4 - self.a1 * y1) * pow(den, -1, p)
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p)
        lam %= p
        x3 = (lam * lam + self.a1 * lam - self.a2 - x1 - x2) % p
        y3 = (-(lam + self.a1) * x3 - (y1 - lam * x1) - self.a3) % p
        return (x3, y3)

    def mul(self, n: int, P):
        if n < 0:
            n, P = -n, self.neg(P)
        R = None
        while n:
            if n & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            n >>= 1
        return R

    def random_point(self, rng: random.Random):
        p = self.p
        while True:
            x = rng.randrange(p)
            r = sqrt_mod(self.rhs(x), p)
            if r is None:
                continue
            if rng.random() < 0.5:
                r = -r % p
            y = (r - self.a1 * x - self.a3) * pow(2, -1, p) % p
            return (x, y)


def _hasse_interval(p: int) -> tuple[int, int]:
    s = math.isqrt(4 * p)
    return p + 1 - s, p + 1 + s


def _bsgs_multiple(C: _FpCurve, P, lo: int, hi: int) -> int:
    """Some n in [lo, hi] with nP = O."""
    m = math.isqrt(hi - lo) + 1
    baby = {}
    R = None
    for j in range(m):
        baby.setdefault(R, j)
        R = C.add(R, P)
    step = C.mul(m, P)
    G = C.mul(lo, P)
    for i in range(m + 1):
        # (lo + i*m) P + j P = O  <=>  j P = -(lo + i*m) P
        j = baby.get(C.neg(G))
        if j is not None:
            return lo + i * m + j
        G = C.add(G, step)
    raise ArithmeticError("no multiple of the point order in the Hasse interval")


def _exact_order(C: _FpCurve, P, multiple: int) -> int:
    n = multiple
    for q, _ in factorize(multiple):
        while n % q == 0 and C.mul(n // q, P) is None:
            n //= q
    return n


def _point_order(C: _FpCurve, P) -> int:
    lo, hi = _hasse_interval(C.p)
    return _exact_order(C, P, _bsgs_multiple(C, P, max(lo, 1), hi))


def _merge_orders(C: _FpCurve, P, m: int, Q, n: int):
    """An element of order lcm(m, n) built from P (order m) and Q (order n)."""
    mp, nq = 1, 1
    for q, _ in factorize(math.lcm(m, n)):
        vm = _vp(m, q)
        vn = _vp(n, q)
        if vm >= vn:
            mp *= q**vm
        else:
            nq *= q**vn
    R = C.add(C.mul(m // mp, P), C.mul(n // nq, Q))
    return R, mp * nq


def _vp(n: int, q: int) -> int:
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def _in_cyclic(C: _FpCurve, X, G, order: int) -> bool:
    """Baby-step giant-step membership test X in <G>, with #<G> = order."""
    if X is None:
        return True
    m = math.isqrt(order) + 1
    baby = {}
    R = None
    for j in range(m):
        baby.setdefault(R, j)
        R = C.add(R, G)
    step = C.neg(C.mul(m, G))
    Y = X
    for _ in range(m + 1):
        if Y in baby:
            return True
        Y = C.add(Y, step)
    return False


def _divisors_ascending(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n):
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def group_structure(E: WeierstrassCurve, p: int, samples: int = 20, seed: int | None = None) -> tuple[int, int]:
    """(n1, n2) with E(F_p) = Z/n1 x Z/n2, n1 | n2, via baby-step giant-step."""
    C = _FpCurve(_reduce_ainvs(E, p), p)
    rng = random.Random(p if seed is None else seed)
    lo, hi = _hasse_interval(p)
    G, L = None, 1
    points = []
    for _ in range(samples):
        P = C.random_point(rng)
        points.append(P)
        G, L = _merge_orders(C, G, L, P, _point_order(C, P))
    n1 = 1
    g = math.gcd(L, p - 1)
    for P in points:
        # order of P in the cyclic quotient E(F_p)/<G>, which divides gcd(n2, p - 1)
        c = next(c for c in _divisors_ascending(g) if _in_cyclic(C, C.mul(c, P), G, L))
        n1 = math.lcm(n1, c)
    n2 = L
    N = n1 * n2
    if not lo <= N <= hi:
        raise ArithmeticError(f"BSGS structure {n1}x{n2} violates the Hasse bound at p={p}")
    return n1, n2


def _count_naive(ainvs: tuple[int, ...], p: int) -> int:
    C = _FpCurve(ainvs, p)
    squares = bytearray(p)
    for y in range(p):
        squares[y * y % p] = 1
    total = p + 1
    for x in range(p):
        r = C.rhs(x)
        if r == 0:
            continue
        total += 1 if squares[r] else -1
    return total


def count_points(E: WeierstrassCurve, p: int, method: str = "auto") -> int:
    """#E(F_p) including the point at infinity, for odd p of good reduction."""
    if p == 2 or not is_prime(p):
        raise ValueError("count_points needs an odd prime")
    if p >= MAX_P:
        raise ValueError(f"p must be below {MAX_P}")
    ainvs = _reduce_ainvs(E, p)
    if method == "auto":
        method = "naive" if p <= NAIVE_LIMIT else "bsgs"
    if method == "naive":
        N = _count_naive(ainvs, p)
    elif method == "bsgs":
        n1, n2 = group_structure(E, p)
        N = n1 * n2
    else:
        raise ValueError(f"unknown counting method {method!r}")
    a = p + 1 - N
    assert a * a <= 4 * p, "Hasse bound violated"
    return N


def trace_of_frobenius(E: WeierstrassCurve, p: int) -> int:
    return p + 1 - count_points(E, p)


def ordinary_or_supersingular(E: WeierstrassCurve, p: int) -> str:
    """Supersingular iff p | a_p (which for p >= 5 means a_p = 0)."""
    a = trace_of_frobenius(E, p)
    return SUPERSINGULAR if a % p == 0 else ORDINARY
