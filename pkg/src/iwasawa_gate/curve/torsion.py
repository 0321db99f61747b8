"""Torsion subgroups of rational curves over Q and real quadratic fields.

Upper bound: E(K)_tors injects into E(F_v) for every good prime v of residue
characteristic >= 3 (here always of degree one), so it is bounded by the gcd
of #E(F_p) over auxiliary primes p that split in K.

Lower bound: the 2-power part is the closure of E(K)[2] under point halving;
the odd part comes from rational roots of psi_3, psi_5, psi_7.  For odd l,
E(K)[l] is the sum of the l-torsion of E and of its quadratic twist by d,
and only one of the two can be nonzero over a real field, so every odd
torsion point of E(K) has a rational x-coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..arith.integers import int_valuation, next_prime
from ..quadfield import QQ, is_split
from . import polynomials as P
from .counting import count_points
from .division import division_polynomial, psi2_squared
from .weierstrass import INFINITY, CurvePoint, WeierstrassCurve, as_field

AUX_PRIMES = 10
MAX_AUX_PRIMES = 40
ODD_TORSION_PRIMES = (3, 5, 7)


class TorsionBoundsError(ArithmeticError):
    """Raised when the exhibited subgroup is smaller than the reduction bound."""

    def __init__(self, lower: int, upper: int, field):
        super().__init__(f"torsion bounds did not meet over {field}: found {lower} points, bound {upper}")
        self.lower, self.upper = lower, upper


@dataclass(frozen=True)
class TorsionStructure:
    """Z/n1 x Z/n2 with n1 | n2, and generators of exact orders n1, n2."""

    n1: int
    n2: int
    generators: tuple[CurvePoint, CurvePoint]
    field_d: int = 1
    aux_primes: tuple[int, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return self.n1 * self.n2

    @property
    def invariants(self) -> tuple[int, ...]:
        return tuple(n for n in (self.n1, self.n2) if n > 1)

    def __str__(self):
        parts = [f"Z/{n}" for n in self.invariants]
        return " x ".join(parts) if parts else "trivial"


def _curve_over(E: WeierstrassCurve, K) -> WeierstrassCurve:
    return E if K == QQ else E.base_change(K)


def two_torsion_points(E: WeierstrassCurve, K=QQ) -> list[CurvePoint]:
    """Nonzero points of E(K)[2] for a rational curve E."""
    EK = _curve_over(E, K)
    xs = P.roots_in_field(psi2_squared(E), K)
    pts = []
    for x in xs:
        x = K.coerce(x)
        pts.append(CurvePoint(x, -(EK.a1 * x + EK.a3) / 2))
    return pts


def _cubic_roots(E: WeierstrassCurve, K) -> list | None:
    roots = P.roots_in_field(psi2_squared(E), K)
    return roots if len(roots) == 3 else None


def halve_point(E: WeierstrassCurve, Q: CurvePoint, K=QQ, method: str = "auto") -> set[CurvePoint]:
    """All P in E(K) with 2P = Q.

    ``method="formula"`` needs E[2] rational over K: writing the curve as
    Y^2 = (x - e1)(x - e2)(x - e3), Q has a half iff every x(Q) - e_i is a
    square r_i^2 in K, and x(P) = x(Q) + r1r2 + r1r3 + r2r3 over the sign
    choices.  ``method="quartic"`` solves the duplication quartic
    x^4 - b4x^2 - 2b6x - b8 = x(Q) * psi_2^2(x) over Q and reads off roots
    in K through its quadratic factors; it needs x(Q) rational.
    """
    K = as_field(K)
    EK = _curve_over(E, K)
    if Q.is_infinity:
        return {INFINITY, *two_torsion_points(E, K)}
    roots = _cubic_roots(E, K)
    if method == "auto":
        method = "formula" if roots is not None else "quartic"
    if method == "formula":
        if roots is None:
            raise ValueError("formula halving needs E[2] rational over K")
        xs = _formula_candidates(K, K.coerce(Q.x), [K.coerce(e) for e in roots])
    elif method == "quartic":
        if not K.is_rational(Q.x):
            raise NotImplementedError("quartic halving needs a rational x-coordinate")
        xs = _quartic_candidates(E, K, Fraction(K.coerce(Q.x).a if K != QQ else Q.x))
    else:
        raise ValueError(f"unknown halving method {method!r}")
    halves = set()
    for x in xs:
        for R in EK.lift_x(x):
            if EK.double(R) == Q:
                halves.add(R)
    return halves


def _formula_candidates(K, x0, es) -> set:
    rs = []
    for e in es:
        r = K.sqrt(x0 - e)
        if r is None:
            return set()
        rs.append(r)
    r1, r2, r3 = rs
    xs = set()
    for s2 in (1, -1):
        for s3 in (1, -1):
            a, b, c = r1, s2 * r2, s3 * r3
            xs.add(x0 + a * b + a * c + b * c)
    return xs


def _quartic_candidates(E: WeierstrassCurve, K, x0: Fraction) -> list:
    inv = E.invariants()
    num = P.trim((-inv.b8, -2 * inv.b6, -inv.b4, 0, 1))
    g = P.sub(num, P.scale(psi2_squared(E), x0))
    return P.roots_in_field(g, K)


def _two_power_torsion(E: WeierstrassCurve, K, cap: int) -> set[CurvePoint]:
    """Closure of {O} under halving, stopping once ``cap`` points are known."""
    group = {INFINITY}
    frontier = [INFINITY]
    while frontier and len(group) < cap:
        Q = frontier.pop()
        for R in halve_point(E, Q, K):
            if R not in group:
                group.add(R)
                frontier.append(R)
    return group


def _odd_torsion(E: WeierstrassCurve, K, ell: int) -> list[CurvePoint]:
    EK = _curve_over(E, K)
    pts = []
    for x in P.rational_roots(division_polynomial(E, ell)):
        pts.extend(EK.lift_x(K.coerce(x)))
    return pts


def auxiliary_primes(E: WeierstrassCurve, K=QQ, count: int = AUX_PRIMES) -> list[int]:
    """First ``count`` odd primes of good reduction for the model that split in K."""
    K = as_field(K)
    disc = Fraction(E.discriminant)
    out, p = [], 2
    while len(out) < count:
        p = next_prime(p)
        if disc.numerator % p == 0 or any(Fraction(a).denominator % p == 0 for a in E.ainvs):
            continue
        if K != QQ and not is_split(K, p):
            continue
        out.append(p)
    return out


def torsion_upper_bound(E: WeierstrassCurve, K=QQ, count: int = AUX_PRIMES) -> tuple[int, list[int]]:
    primes = auxiliary_primes(E, K, count)
    bound = 0
    for p in primes:
        bound = math.gcd(bound, count_points(E, p))
    return bound, primes


def _structure(E: WeierstrassCurve, points: set[CurvePoint]) -> tuple[int, int, CurvePoint, CurvePoint]:
    orders = {R: E.order(R) for R in points}
    n = len(points)
    g2 = max(points, key=lambda R: (orders[R], repr(R)))
    n2 = orders[g2]
    n1 = n // n2
    if n1 == 1:
        return 1, n2, INFINITY, g2
    span = set()
    R = INFINITY
    for _ in range(n2):
        span.add(R)
        R = E.add(R, g2)
    for g1 in sorted(points, key=repr):
        if orders[g1] != n1:
            continue
        multiples = [E.multiply(k, g1) for k in range(1, n1)]
        if not any(M in span for M in multiples):
            return n1, n2, g1, g2
    raise ArithmeticError("point set is not a group of rank <= 2")


def torsion_subgroup(E: WeierstrassCurve, K=None) -> TorsionStructure:
    """E(K)_tors for a curve over Q, with K = Q (None) or a real quadratic field."""
    K = as_field(K)
    if not E.is_rational():
        raise ValueError("torsion_subgroup expects a curve defined over Q")
    EK = _curve_over(E, K)
    bound, primes = torsion_upper_bound(E, K)
    cap = 2 ** int_valuation(bound, 2) if bound else 1
    two_part = _two_power_torsion(E, K, cap)
    odd_parts = {}
    for ell in ODD_TORSION_PRIMES:
        if bound % ell == 0:
            pts = _odd_torsion(E, K, ell)
            if pts:
                odd_parts[ell] = pts
    found = len(two_part) * math.prod(ell for ell in odd_parts)
    count = AUX_PRIMES
    while found != bound and count < MAX_AUX_PRIMES:
        count += 10
        bound, primes = torsion_upper_bound(E, K, count)
    if found != bound:
        raise TorsionBoundsError(found, bound, K)
    n1, n2, g1, g2 = _structure(EK, two_part)
    for ell, pts in odd_parts.items():
        # E(K)[l] is cyclic of order l here
        g2 = EK.add(g2, pts[0])
        n2 *= ell
    return TorsionStructure(n1, n2, (g1, g2), K.d, tuple(primes))


__all__ = [
    "TorsionBoundsError",
    "TorsionStructure",
    "auxiliary_primes",
    "halve_point",
    "torsion_subgroup",
    "torsion_upper_bound",
    "two_torsion_points",
]
