"""Real quadratic fields Q(sqrt d): elements, prime splitting, residue maps, local degrees."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .arith.finite import PrimeFieldElement, hensel_sqrt, sqrt_mod
from .arith.integers import is_prime, is_squarefree, kronecker_symbol, rational_sqrt
from .arith.padic import DEFAULT_PRECISION, PadicNumber

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"


class RationalField:
    """Q, with the same small interface as QuadraticField (element/sqrt/contains)."""

    d = 1
    discriminant = 1

    def element(self, a, b=0) -> Fraction:
        if b:
            raise ValueError("Q has no sqrt(d) component")
        return Fraction(a)

    def coerce(self, x) -> Fraction:
        if isinstance(x, QuadElement):
            if x.b != 0:
                raise ValueError(f"{x} is not rational")
            return x.a
        return Fraction(x)

    def sqrt(self, x) -> Fraction | None:
        return rational_sqrt(self.coerce(x))

    def is_rational(self, x) -> bool:
        return True

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


@dataclass(frozen=True)
class QuadraticField:
    """K = Q(sqrt d) with d squarefree and d > 1."""

    d: int

    def __post_init__(self):
        if self.d <= 1 or not is_squarefree(self.d):
            raise ValueError(f"d = {self.d} must be a squarefree integer > 1")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def sqrt_d(self) -> "QuadElement":
        return QuadElement(self, Fraction(0), Fraction(1))

    def element(self, a, b=0) -> "QuadElement":
        return QuadElement(self, Fraction(a), Fraction(b))

    def coerce(self, x) -> "QuadElement":
        if isinstance(x, QuadElement):
            if x.field != self:
                raise ValueError("element of a different quadratic field")
            return x
        return QuadElement(self, Fraction(x), Fraction(0))

    def is_rational(self, x) -> bool:
        return self.coerce(x).b == 0

    def sqrt(self, x) -> "QuadElement | None":
        """A square root of x inside K, or None."""
        x = self.coerce(x)
        a, b, d = x.a, x.b, self.d
        if b == 0:
            r = rational_sqrt(a)
            if r is not None:
                return self.element(r)
            r = rational_sqrt(a / d)
            return None if r is None else self.element(0, r)
        n = rational_sqrt(a * a - d * b * b)
        if n is None:
            return None
        # (u + w sqrt d)^2 = a + b sqrt d  <=>  u^2 + d w^2 = a, 2uw = b
        for u2 in ((a + n) / 2, (a - n) / 2):
            u = rational_sqrt(u2)
            if u:
                return self.element(u, b / (2 * u))
        return None

    def __repr__(self):
        return f"Q(sqrt({self.d}))"


@dataclass(frozen=True)
class QuadElement:
    """a + b*sqrt(d) in a real quadratic field."""

    field: QuadraticField
    a: Fraction
    b: Fraction

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.field != self.field:
                raise ValueError("elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElement(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.d
        return QuadElement(self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElement":
        return QuadElement(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadElement(self.field, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadElement(self.field, Fraction(1), Fraction(0)), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.field.d, self.a, self.b))

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.field.d})"


@dataclass(frozen=True)
class QuadPrime:
    """A prime of K above the rational prime p.

    For split primes ``sign`` picks the square root r of d used by the residue
    map: +1 takes the root in [1, (p-1)/2], -1 its negative.
    """

    d: int
    p: int
    splitting: str
    sign: int = 0

    @property
    def e(self) -> int:
        return 2 if self.splitting == RAMIFIED else 1

    @property
    def f(self) -> int:
        return 2 if self.splitting == INERT else 1

    @property
    def count(self) -> int:
        """Number of primes of K above p."""
        return 2 if self.splitting == SPLIT else 1

    def root(self, precision: int = 1) -> int:
        """Square root of d modulo p**precision selected by this prime."""
        if self.splitting != SPLIT:
            raise ValueError("root datum exists only for split primes")
        if self.p == 2:
            raise ValueError("root datum for p = 2 is not implemented")
        return _split_root(self.d, self.p, self.sign, precision)

    def __repr__(self):
        tag = {1: "+", -1: "-"}.get(self.sign, "")
        return f"QuadPrime(d={self.d}, p={self.p}, {self.splitting}{tag})"


@lru_cache(maxsize=None)
def _split_root(d: int, p: int, sign: int, precision: int) -> int:
    r0 = sqrt_mod(d, p)
    r0 = min(r0, p - r0)
    if sign < 0:
        r0 = p - r0
    return hensel_sqrt(d, p, r0, precision)


def splitting_type(K: QuadraticField, p: int) -> tuple[QuadPrime, ...]:
    """The primes of K above p: two when p splits, one otherwise."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker_symbol(K.discriminant, p)
    if k == 0:
        return (QuadPrime(K.d, p, RAMIFIED),)
    if k == -1:
        return (QuadPrime(K.d, p, INERT),)
    return (QuadPrime(K.d, p, SPLIT, 1), QuadPrime(K.d, p, SPLIT, -1))


def is_split(K: QuadraticField, p: int) -> bool:
    return kronecker_symbol(K.discriminant, p) == 1


def embed(x: Union[QuadElement, int, Fraction], v: QuadPrime, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """Image of x in K_v = Q_p for a split prime v (odd p)."""
    if v.splitting != SPLIT:
        raise ValueError("K_v = Q_p only for split primes")
    if not isinstance(x, QuadElement):
        return PadicNumber.from_rational(x, v.p, precision)
    a, b = x.a, x.b
    if b == 0:
        return PadicNumber.from_rational(a, v.p, precision)
    # extra digits cover cancellation between a and b*r
    work = precision + 2 * _height_guard(x, v.p)
    r = PadicNumber.from_int(v.root(work), v.p, work)
    return PadicNumber.from_rational(a, v.p, work) + PadicNumber.from_rational(b, v.p, work) * r


def _height_guard(x: QuadElement, p: int) -> int:
    n = abs(x.norm().numerator) or 1
    g = 0
    while n % p == 0:
        n //= p
        g += 1
    den = x.a.denominator * x.b.denominator
    while den % p == 0:
        den //= p
        g += 1
    return g + 1


def residue_map(x: Union[QuadElement, int, Fraction], v: QuadPrime) -> PrimeFieldElement:
    """Reduction of a v-integral element into the residue field F_p of a split prime."""
    if v.splitting != SPLIT:
        raise ValueError("residue_map is implemented for split primes (residue field F_p)")
    if not isinstance(x, QuadElement):
        return PrimeFieldElement.from_rational(x, v.p)
    if x.a.denominator % v.p == 0 or x.b.denominator % v.p == 0:
        image = embed(x, v, precision=4)
        if image.valuation < 0:
            raise ValueError(f"{x} is not integral at {v}")
        return PrimeFieldElement(image.lift() % v.p, v.p)
    return PrimeFieldElement.from_rational(x.a, v.p) + PrimeFieldElement.from_rational(x.b, v.p) * v.root(1)


def local_degrees(K: QuadraticField, v: QuadPrime) -> tuple[int, int]:
    """([K_v ∩ Q_p^unr : Q_p], [K_v ∩ Q_p^cyc : Q_p]) for the prime v.

    The cyclotomic Z_p-extension of Q_p is totally ramified of p-power degree,
    so a quadratic K_v meets it trivially when p is odd.
    """
    if v.p == 2 and v.splitting == RAMIFIED:
        raise ValueError("local degrees at ramified primes above 2 are not implemented")
    return (v.f, 1)
