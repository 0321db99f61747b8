"""Capped-precision p-adic numbers and the Iwasawa-branch logarithm.

A nonzero value is ``p**valuation * unit`` with the unit known modulo
``p**precision``; ``absprec = valuation + precision`` is the absolute
precision.  Zero carries ``valuation = math.inf`` and an absolute precision
(``math.inf`` for an exact zero).  No operation reports digits beyond what
its inputs determine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .integers import int_valuation, padic_valuation

DEFAULT_PRECISION = 40

INF = math.inf

Number = Union[int, Fraction, "PadicNumber"]


@dataclass(frozen=True)
class PadicNumber:
    p: int
    valuation: Union[int, float]
    unit: int
    absprec: Union[int, float]

    # constructors

    @classmethod
    def zero(cls, p: int, absprec: Union[int, float] = INF) -> "PadicNumber":
        return cls(p, INF, 0, absprec)

    @classmethod
    def from_rational(cls, x, p: int, precision: int = DEFAULT_PRECISION) -> "PadicNumber":
        """Exact rational rounded to ``precision`` significant p-adic digits."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        if precision < 1:
            raise ValueError("precision must be positive")
        v = padic_valuation(x, p)
        num = x.numerator // p ** max(v, 0)
        den = x.denominator // p ** max(-v, 0)
        mod = p**precision
        return cls(p, v, num * pow(den, -1, mod) % mod, v + precision)

    @classmethod
    def from_int(cls, n: int, p: int, absprec: int) -> "PadicNumber":
        """Integer known modulo p**absprec."""
        return _normalize(p, 0, n, absprec)

    # basic properties

    @property
    def precision(self) -> int:
        """Relative precision (significant digits); 0 for zero."""
        if self.is_zero():
            return 0
        return int(self.absprec - self.valuation)

    def is_zero(self) -> bool:
        return self.valuation == INF

    def is_unit(self) -> bool:
        return self.valuation == 0

    def lift(self) -> int:
        """Integer representative in [0, p**absprec); needs valuation >= 0."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ValueError("not a p-adic integer")
        return self.unit * self.p**self.valuation % self.p ** int(self.absprec)

    def unit_part(self) -> "PadicNumber":
        if self.is_zero():
            raise ValueError("zero has no unit part")
        return PadicNumber(self.p, 0, self.unit, self.precision)

    def agrees_with(self, other: Number, digits: Union[int, None] = None) -> bool:
        """True when the difference vanishes to the joint absolute precision (or ``digits``)."""
        diff = self - other
        target = diff.absprec if digits is None else digits
        return diff.is_zero() or diff.valuation >= target

    def digits(self, n: Union[int, None] = None) -> list[int]:
        """Base-p digits of the unit, least significant first."""
        count = self.precision if n is None else min(n, self.precision)
        u, out = self.unit, []
        for _ in range(count):
            u, r = divmod(u, self.p)
            out.append(r)
        return out

    # arithmetic

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("p-adic numbers for different primes")
            return other
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PadicNumber.zero(self.p)
            if self.absprec == INF:
                rel = DEFAULT_PRECISION
            else:
                rel = max(1, int(self.absprec - padic_valuation(other, self.p)))
            return PadicNumber.from_rational(other, self.p, rel)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        a = self
        absprec = min(a.absprec, b.absprec)
        if a.is_zero() and b.is_zero():
            return PadicNumber.zero(a.p, absprec)
        if a.is_zero():
            a, b = b, a
        if b.is_zero():
            return _normalize(a.p, a.valuation, a.unit, absprec)
        v = min(a.valuation, b.valuation)
        s = a.unit * a.p ** (a.valuation - v) + b.unit * b.p ** (b.valuation - v)
        return _normalize(a.p, v, s, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        mod = self.p**self.precision
        return PadicNumber(self.p, self.valuation, -self.unit % mod, self.absprec)

    def __sub__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else b + (-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        a = self
        if a.is_zero() or b.is_zero():
            if a.is_zero() and b.is_zero():
                return PadicNumber.zero(a.p, a.absprec + b.absprec)
            z, nz = (a, b) if a.is_zero() else (b, a)
            return PadicNumber.zero(a.p, z.absprec + nz.valuation)
        rel = min(a.precision, b.precision)
        mod = a.p**rel
        v = a.valuation + b.valuation
        return PadicNumber(a.p, v, a.unit * b.unit % mod, v + rel)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero():
            raise ZeroDivisionError("p-adic zero has no inverse")
        rel = self.precision
        mod = self.p**rel
        return PadicNumber(self.p, -self.valuation, pow(self.unit, -1, mod), -self.valuation + rel)

    def __truediv__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else self * b.inverse()

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return b if b is NotImplemented else b * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber.from_rational(1, self.p, max(self.precision, 1))
        if self.is_zero():
            return PadicNumber.zero(self.p, self.absprec * n)
        rel = self.precision
        mod = self.p**rel
        v = self.valuation * n
        return PadicNumber(self.p, v, pow(self.unit, n, mod), v + rel)

    def __str__(self):
        p = self.p
        if self.is_zero():
            return "0" if self.absprec == INF else f"O({p}^{self.absprec})"
        terms = []
        for i, dgt in enumerate(self.digits()):
            if dgt:
                e = self.valuation + i
                pw = "" if e == 0 else (f"{p}" if e == 1 else f"{p}^{e}")
                if not pw:
                    terms.append(str(dgt))
                else:
                    terms.append(pw if dgt == 1 else f"{dgt}*{pw}")
        terms.append(f"O({p}^{self.absprec})")
        return " + ".join(terms)


def _normalize(p: int, v: int, s: int, absprec) -> PadicNumber:
    """Build p^v * s known modulo p^absprec, stripping factors of p from s."""
    if absprec == INF:
        raise ValueError("nonzero values need a finite precision")
    if absprec <= v:
        return PadicNumber.zero(p, absprec)
    mod = p ** int(absprec - v)
    s %= mod
    if s == 0:
        return PadicNumber.zero(p, absprec)
    k = int_valuation(s, p)
    v += k
    return PadicNumber(p, v, (s // p**k) % p ** int(absprec - v), absprec)


def padic_log(u: PadicNumber, branch: str = "iwasawa") -> PadicNumber:
    """Iwasawa logarithm: log(p) = 0, so log(u) is the log of the unit part.

    Computed as log(w) / (p - 1) with w = unit**(p - 1) = 1 + x, v(x) >= 1,
    through the series for log(1 + x).  For odd p the truncated terms and the
    divisions by k lose nothing, so the result is exact to absolute precision
    equal to the relative precision of ``u``.  Its relative precision is that
    figure minus the valuation of the logarithm.
    """
    if branch != "iwasawa":
        raise ValueError("only the Iwasawa branch (log p = 0) is supported")
    if u.is_zero():
        raise ValueError("log of zero")
    p, N = u.p, u.precision
    if p == 2:
        raise ValueError("padic_log needs an odd prime")
    mod_n = p**N
    w = pow(u.unit, p - 1, mod_n)
    x = (w - 1) % mod_n
    if x == 0:
        return PadicNumber.zero(p, N)
    m = int_valuation(x, p)
    # last k with k*m - floor(log_p k) < N
    k_max = 1
    while (k_max + 1) * m - _floor_log(k_max + 1, p) < N:
        k_max += 1
    guard = _floor_log(k_max, p) + 1
    mod_work = p ** (N + guard)
    total, xk = 0, 1
    for k in range(1, k_max + 1):
        xk = xk * x % mod_work
        e = int_valuation(k, p)
        term = (xk // p**e) * pow(k // p**e, -1, mod_n)
        total += -term if k % 2 == 0 else term
    total = total * pow(p - 1, -1, mod_n) % mod_n
    return PadicNumber.from_int(total, p, N)


def _floor_log(k: int, p: int) -> int:
    e = 0
    while k >= p:
        k //= p
        e += 1
    return e
