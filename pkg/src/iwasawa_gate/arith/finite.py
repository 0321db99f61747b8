"""Finite fields F_p and F_{p^2}, square roots and Hensel lifting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .integers import is_prime


@dataclass(frozen=True)
class PrimeFieldElement:
    """An element of F_p, stored as its least nonnegative residue."""

    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    @classmethod
    def from_rational(cls, x, p: int) -> "PrimeFieldElement":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"{x} is not {p}-integral")
        return cls(x.numerator * pow(x.denominator, -1, p), p)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ValueError("elements of different prime fields")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return PrimeFieldElement.from_rational(other, self.p).value
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.p)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return PrimeFieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * PrimeFieldElement(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElement(o, self.p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return PrimeFieldElement(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self._coerce(other) % self.p
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"

    def is_square(self) -> bool:
        return finite_field_sqrt_exists(self)

    def sqrt(self) -> "PrimeFieldElement | None":
        r = sqrt_mod(self.value, self.p)
        return None if r is None else PrimeFieldElement(r, self.p)


def finite_field_sqrt_exists(a: PrimeFieldElement) -> bool:
    """Euler's criterion; zero counts as a square."""
    if a.p == 2 or a.value == 0:
        return True
    return pow(a.value, (a.p - 1) // 2, a.p) == 1


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """Tonelli-Shanks square root mod an odd prime (or p = 2); None for nonresidues."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def hensel_sqrt(a: int, p: int, r0: int, precision: int) -> int:
    """Lift a simple root r0 of x^2 = a mod p (p odd, p not dividing a) to mod p^precision."""
    if (r0 * r0 - a) % p:
        raise ValueError("r0 is not a square root of a mod p")
    r, k = r0 % p, 1
    while k < precision:
        k = min(2 * k, precision)
        mod = p**k
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r


@dataclass(frozen=True)
class Fp2Element:
    """a + b*t in F_{p^2} = F_p[t]/(t^2 - n), with n the least quadratic nonresidue mod p."""

    a: int
    b: int
    p: int

    def __post_init__(self):
        if self.p == 2 or not is_prime(self.p):
            raise ValueError("F_{p^2} is implemented for odd primes only")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    @property
    def nonresidue(self) -> int:
        return _least_nonresidue(self.p)

    def __mul__(self, other: "Fp2Element") -> "Fp2Element":
        n = self.nonresidue
        return Fp2Element(self.a * other.a + n * self.b * other.b, self.a * other.b + self.b * other.a, self.p)

    def __pow__(self, e: int) -> "Fp2Element":
        out, base = Fp2Element(1, 0, self.p), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        w = self ** ((self.p * self.p - 1) // 2)
        return w.a == 1 and w.b == 0


def _least_nonresidue(p: int) -> int:
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


@dataclass(frozen=True)
class GF:
    """The prime field F_p as a coefficient field (coerce/sqrt interface)."""

    p: int

    def coerce(self, x) -> PrimeFieldElement:
        if isinstance(x, PrimeFieldElement):
            return x
        return PrimeFieldElement.from_rational(x, self.p)

    def element(self, a, b=0) -> PrimeFieldElement:
        if b:
            raise ValueError("F_p has no sqrt(d) component")
        return self.coerce(a)

    def sqrt(self, x) -> "PrimeFieldElement | None":
        return self.coerce(x).sqrt()

    def is_rational(self, x) -> bool:
        return True

    def __repr__(self):
        return f"F_{self.p}"
