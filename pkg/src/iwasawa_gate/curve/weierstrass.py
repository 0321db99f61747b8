"""Long Weierstrass curves y^2 + a1xy + a3y = x^3 + a2x^2 + a4x + a6 and their group law.

Coefficients live in any field whose elements support + - * / and comparison
with integers.  Over Q they are ``Fraction`` values and over a real quadratic
field ``QuadElement`` values; reductions mod p use ``PrimeFieldElement``.
The ``field`` attribute provides ``coerce`` and ``sqrt`` for solving for y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple

from ..arith.finite import GF, PrimeFieldElement
from ..quadfield import QQ, QuadElement, QuadraticField

# Cremona label -> a-invariants
CURVES = {
    "15a1": (1, 1, 1, -10, -10),
    "15a3": (1, 1, 1, -5, 2),
}


class SingularCurveError(ValueError):
    pass


class Invariants(NamedTuple):
    b2: Any
    b4: Any
    b6: Any
    b8: Any
    c4: Any
    c6: Any
    discriminant: Any
    j: Any


@dataclass(frozen=True)
class CurvePoint:
    """Affine point (x, y), or the point at infinity when both are None."""

    x: Any = None
    y: Any = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = CurvePoint()


class WeierstrassCurve:
    def __init__(self, a1, a2, a3, a4, a6, field=None):
        if field is None:
            field = _infer_field((a1, a2, a3, a4, a6))
        self.field = field
        self.ainvs = tuple(field.coerce(a) for a in (a1, a2, a3, a4, a6))
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = a1 * a3 + 2 * a4
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise SingularCurveError(f"singular Weierstrass model {self.ainvs}")
        if not (c4 * c4 * c4 - c6 * c6 == 1728 * disc):
            raise ArithmeticError("c4^3 - c6^2 != 1728*Delta")
        self._inv = Invariants(b2, b4, b6, b8, c4, c6, disc, c4 * c4 * c4 / disc)

    @classmethod
    def from_label(cls, label: str) -> "WeierstrassCurve":
        try:
            return cls(*CURVES[label.lower()])
        except KeyError:
            raise ValueError(f"unknown curve label {label!r}; known: {sorted(CURVES)}") from None

    def invariants(self) -> Invariants:
        return self._inv

    def __getattr__(self, name):
        inv = self.__dict__.get("_inv")
        if inv is not None and name in Invariants._fields:
            return getattr(inv, name)
        raise AttributeError(name)

    @property
    def a1(self):
        return self.ainvs[0]

    @property
    def a2(self):
        return self.ainvs[1]

    @property
    def a3(self):
        return self.ainvs[2]

    @property
    def a4(self):
        return self.ainvs[3]

    @property
    def a6(self):
        return self.ainvs[4]

    def __repr__(self):
        return f"WeierstrassCurve({list(self.ainvs)} over {self.field})"

    def __eq__(self, other):
        return isinstance(other, WeierstrassCurve) and self.ainvs == other.ainvs and self.field == other.field

    def __hash__(self):
        return hash((self.ainvs, repr(self.field)))

    def is_rational(self) -> bool:
        return self.field == QQ

    def is_integral(self) -> bool:
        return self.is_rational() and all(a.denominator == 1 for a in self.ainvs)

    def base_change(self, field) -> "WeierstrassCurve":
        return WeierstrassCurve(*self.ainvs, field=field)

    def reduce(self, p: int) -> "WeierstrassCurve":
        """The reduction mod p of a p-integral rational model; raises on bad reduction."""
        if not self.is_rational():
            raise ValueError("reduce() needs a model over Q")
        return WeierstrassCurve(*self.ainvs, field=GF(p))

    def change_coordinates(self, u, r, s, t) -> "WeierstrassCurve":
        """Model for x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        a1, a2, a3, a4, a6 = self.ainvs
        a6p = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1
        a4p = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        a3p = a3 + r * a1 + 2 * t
        a2p = a2 - s * a1 + 3 * r - s * s
        a1p = a1 + 2 * s
        return WeierstrassCurve(a1p / u, a2p / u**2, a3p / u**3, a4p / u**4, a6p / u**6, field=self.field)

    # points

    def is_on_curve(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        a1, a2, a3, a4, a6 = self.ainvs
        x, y = P.x, P.y
        return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(self.field.coerce(x), self.field.coerce(y))
        if not self.is_on_curve(P):
            raise ValueError(f"{P} is not on {self}")
        return P

    def two_torsion_polynomial(self, x):
        """(2y + a1x + a3)^2 as a function of x: 4x^3 + b2x^2 + 2b4x + b6."""
        b2, b4, b6 = self._inv.b2, self._inv.b4, self._inv.b6
        return 4 * x * x * x + b2 * x * x + 2 * b4 * x + b6

    def lift_x(self, x) -> list[CurvePoint]:
        """All points of E over its coefficient field with the given x-coordinate."""
        x = self.field.coerce(x)
        r = self.field.sqrt(self.two_torsion_polynomial(x))
        if r is None:
            return []
        a1, a3 = self.a1, self.a3
        ys = {(r - a1 * x - a3) / 2, (-r - a1 * x - a3) / 2}
        return [CurvePoint(x, y) for y in ys]

    def negate(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        if P.x == Q.x:
            if P.y + Q.y + a1 * Q.x + a3 == 0:
                return INFINITY
            lam = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / (2 * P.y + a1 * P.x + a3)
            nu = (-P.x * P.x * P.x + a4 * P.x + 2 * a6 - a3 * P.y) / (2 * P.y + a1 * P.x + a3)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
            nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x)
        x3 = lam * lam + a1 * lam - a2 - P.x - Q.x
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(x3, y3)

    def double(self, P: CurvePoint) -> CurvePoint:
        return self.add(P, P)

    def multiply(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.multiply(-n, self.negate(P))
        result, addend = INFINITY, P
        while n:
            if n & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            n >>= 1
        return result

    def order(self, P: CurvePoint, bound: int = 10**6) -> int:
        """Order of a torsion point by repeated addition; raises past ``bound``."""
        Q, n = P, 1
        while not Q.is_infinity:
            Q = self.add(Q, P)
            n += 1
            if n > bound:
                raise ValueError(f"{P} has order > {bound} (or infinite)")
        return n


def _infer_field(coeffs):
    for c in coeffs:
        if isinstance(c, QuadElement):
            return c.field
        if isinstance(c, PrimeFieldElement):
            return GF(c.p)
    return QQ


def add(E: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return E.add(P, Q)


def negate(E: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    return E.negate(P)


def multiply(E: WeierstrassCurve, n: int, P: CurvePoint) -> CurvePoint:
    return E.multiply(n, P)


def invariants(E: WeierstrassCurve) -> Invariants:
    return E.invariants()


def as_field(field) -> Any:
    """Normalize a field argument: None or 'Q' -> Q, an int d -> Q(sqrt d)."""
    if field is None or field == "Q" or field == 1:
        return QQ
    if isinstance(field, int):
        return QuadraticField(field)
    return field


__all__ = [
    "CURVES",
    "CurvePoint",
    "INFINITY",
    "Invariants",
    "SingularCurveError",
    "WeierstrassCurve",
    "add",
    "as_field",
    "invariants",
    "multiply",
    "negate",
]
