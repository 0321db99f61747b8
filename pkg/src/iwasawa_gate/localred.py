"""Local reduction data for semistable curves over Q and real quadratic fields.

Minimal models and the split test feed Tamagawa numbers of type I_n and
their products over K.  The Tate period q is computed at a split
multiplicative prime.

Over K = Q(sqrt d) a multiplicative place v above p behaves as follows:

* p split: K_v = Q_p, so the data equal the data over Q.
* p inert: the residue field is F_{p^2}, in which -c6 is always a square, so
  the reduction is split and c_v = v(Delta).
* p ramified: v(Delta) doubles and the split test happens in F_p again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

from .arith.finite import Fp2Element, finite_field_sqrt_exists, PrimeFieldElement
from .arith.integers import factorize, is_power_of_two, is_prime, padic_valuation
from .arith.padic import DEFAULT_PRECISION, PadicNumber
from .curve.weierstrass import WeierstrassCurve, as_field
from .quadfield import INERT, QQ, RAMIFIED, SPLIT, QuadPrime, splitting_type

GOOD = "good"
SPLIT_MULTIPLICATIVE = "split-multiplicative"
NONSPLIT_MULTIPLICATIVE = "nonsplit-multiplicative"
ADDITIVE = "additive-out-of-scope"

Place = Union[int, QuadPrime]


class AdditiveReductionError(ValueError):
    """Additive reduction: outside the semistable analysis implemented here."""


class NotSplitMultiplicativeError(ValueError):
    pass


class Transformation(NamedTuple):
    """x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    def then(self, other: "Transformation") -> "Transformation":
        """Apply ``self`` first, then ``other``."""
        u1, r1, s1, t1 = self
        u2, r2, s2, t2 = other
        return Transformation(u1 * u2, r1 + u1**2 * r2, s1 + u1 * s2, t1 + u1**2 * s1 * r2 + u1**3 * t2)


IDENTITY = Transformation(Fraction(1), Fraction(0), Fraction(0), Fraction(0))


@dataclass(frozen=True)
class LocalReductionData:
    place: Place
    kind: str
    tamagawa: int
    disc_valuation: int

    def __post_init__(self):
        if self.kind == GOOD and (self.tamagawa != 1 or self.disc_valuation != 0):
            raise ValueError("good reduction needs c_v = 1 and v(Delta) = 0")
        if self.kind == SPLIT_MULTIPLICATIVE and self.tamagawa != self.disc_valuation:
            raise ValueError("split I_n needs c_v = n")
        if self.kind == NONSPLIT_MULTIPLICATIVE and self.tamagawa != (2 if self.disc_valuation % 2 == 0 else 1):
            raise ValueError("nonsplit I_n needs c_v = 2 for even n, 1 for odd n")

    @property
    def prime(self) -> int:
        return self.place.p if isinstance(self.place, QuadPrime) else self.place

    @property
    def is_multiplicative(self) -> bool:
        return self.kind in (SPLIT_MULTIPLICATIVE, NONSPLIT_MULTIPLICATIVE)


# minimal models

def _is_p_integral(E: WeierstrassCurve, p: int) -> bool:
    return all(Fraction(a).denominator % p != 0 for a in E.ainvs)


def _v(x, p: int) -> float:
    x = Fraction(x)
    return math.inf if x == 0 else padic_valuation(x, p)


def _integral_at(E: WeierstrassCurve, p: int) -> tuple[WeierstrassCurve, Transformation]:
    k = 0
    while True:
        u = Fraction(1, p**k)
        F = E.change_coordinates(u, 0, 0, 0)
        if _is_p_integral(F, p):
            return F, Transformation(u, Fraction(0), Fraction(0), Fraction(0))
        k += 1


def _mod(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator, -1, m) % m


def _shrink(E: WeierstrassCurve, p: int):
    """A transformation with u = p giving another p-integral model, or None."""
    a1, a2, a3, a4, a6 = (Fraction(a) for a in E.ainvs)
    if p == 2:
        s_range = (0, 1)
    else:
        s_range = (_mod(-a1 / 2, p),)
    for s in s_range:
        # a2' = (a2 - s a1 + 3r - s^2) / p^2 must be integral
        if p == 3:
            r_range = range(9)
        else:
            r_range = (_mod((s * s + s * a1 - a2) / 3, p * p),)
        for r in r_range:
            if p == 2:
                t_range = range(8)
            else:
                t_range = (_mod(-(a3 + r * a1) / 2, p**3),)
            for t in t_range:
                F = E.change_coordinates(Fraction(p), r, s, t)
                if _is_p_integral(F, p):
                    return F, Transformation(Fraction(p), Fraction(r), Fraction(s), Fraction(t))
    return None


def minimal_model_at(E: WeierstrassCurve, p: int) -> tuple[WeierstrassCurve, Transformation]:
    """A p-minimal model of a rational curve and the transformation reaching it."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not E.is_rational():
        raise ValueError("minimal_model_at expects a curve over Q")
    F, T = _integral_at(E, p)
    while _v(F.discriminant, p) >= 12 and _v(F.c4, p) >= 4:
        step = _shrink(F, p)
        if step is None:
            break
        F, S = step
        T = T.then(S)
    return F, T


# reduction types

def _split_at(E: WeierstrassCurve, p: int) -> bool:
    """Node tangents rational over F_p, for a p-minimal model with multiplicative reduction."""
    if p != 2:
        return finite_field_sqrt_exists(PrimeFieldElement.from_rational(-E.c6, p))
    a = [int(_mod(Fraction(x), 2)) for x in E.ainvs]
    a1, a2, a3, a4, a6 = a
    for x0 in (0, 1):
        for y0 in (0, 1):
            f = y0 * y0 + a1 * x0 * y0 + a3 * y0 - (x0**3 + a2 * x0 * x0 + a4 * x0 + a6)
            fx = a1 * y0 - (3 * x0 * x0 + 2 * a2 * x0 + a4)
            fy = 2 * y0 + a1 * x0 + a3
            if f % 2 == 0 and fx % 2 == 0 and fy % 2 == 0:
                # tangent cone at the node: T^2 + a1 T - (3x0 + a2) over F_2
                c = (3 * x0 + a2) % 2
                return any((T * T + a1 * T - c) % 2 == 0 for T in (0, 1))
    raise ArithmeticError("no singular point found in the reduction mod 2")


def _tamagawa(kind: str, n: int) -> int:
    if kind == GOOD:
        return 1
    if kind == SPLIT_MULTIPLICATIVE:
        return n
    return 2 if n % 2 == 0 else 1


@lru_cache(maxsize=4096)
def _rational_data(E: WeierstrassCurve, p: int) -> tuple[str, int]:
    F, _ = minimal_model_at(E, p)
    n = int(_v(F.discriminant, p))
    if n == 0:
        return GOOD, 0
    if _v(F.c4, p) > 0:
        raise AdditiveReductionError(f"additive reduction at {p}")
    return (SPLIT_MULTIPLICATIVE if _split_at(F, p) else NONSPLIT_MULTIPLICATIVE), n


def reduction_type(E: WeierstrassCurve, v: Place, K=None) -> LocalReductionData:
    """Reduction data of a rational curve at a prime of Q or a prime of K above it."""
    if isinstance(v, int):
        kind, n = _rational_data(E, v)
        return LocalReductionData(v, kind, _tamagawa(kind, n), n)
    kind, n = _rational_data(E, v.p)
    if kind == GOOD:
        return LocalReductionData(v, GOOD, 1, 0)
    if v.splitting == RAMIFIED:
        n *= 2
    elif v.splitting == INERT:
        kind = SPLIT_MULTIPLICATIVE if _split_over_fp2(E, v.p) else NONSPLIT_MULTIPLICATIVE
    return LocalReductionData(v, kind, _tamagawa(kind, n), n)


def _split_over_fp2(E: WeierstrassCurve, p: int) -> bool:
    if p == 2:
        # any quadratic over F_2 splits over F_4
        return True
    F, _ = minimal_model_at(E, p)
    c = PrimeFieldElement.from_rational(-F.c6, p)
    return Fp2Element(int(c), 0, p).is_square()


def bad_primes(E: WeierstrassCurve) -> list[int]:
    """Primes of bad reduction of a rational curve."""
    disc = Fraction(E.discriminant)
    candidates = {q for q, _ in factorize(disc.numerator * disc.denominator)} if abs(disc) != 1 else set()
    for a in E.ainvs:
        candidates |= {q for q, _ in factorize(Fraction(a).denominator)} if Fraction(a).denominator > 1 else set()
    return sorted(q for q in candidates if _rational_data(E, q)[1] > 0)


def conductor(E: WeierstrassCurve) -> int:
    """Conductor of a semistable rational curve: the product of its bad primes."""
    return math.prod(bad_primes(E))


def local_data(E: WeierstrassCurve, K=None) -> list[LocalReductionData]:
    """Reduction data at every bad place of K (or Q)."""
    K = as_field(K)
    out = []
    for p in bad_primes(E):
        if K == QQ:
            out.append(reduction_type(E, p))
        else:
            out.extend(reduction_type(E, v, K) for v in splitting_type(K, p))
    return out


class TamagawaProduct(NamedTuple):
    product: int
    is_power_of_two: bool


def tamagawa_product(E: WeierstrassCurve, K=None) -> TamagawaProduct:
    prod = math.prod(r.tamagawa for r in local_data(E, K))
    return TamagawaProduct(prod, is_power_of_two(prod))


# Tate periods

@lru_cache(maxsize=None)
def j_expansion_coefficients(M: int) -> tuple[int, ...]:
    """First M coefficients of q*j(q) = E4^3 / prod(1 - q^n)^24 = 1 + 744q + 196884q^2 + ..."""
    if M < 1:
        return ()
    sigma3 = [0] * M
    for d in range(1, M):
        for m in range(d, M, d):
            sigma3[m] += d**3
    e4 = [1] + [240 * sigma3[n] for n in range(1, M)]
    e4_cubed = _series_mul(_series_mul(e4, e4, M), e4, M)
    eta24 = [1] + [0] * (M - 1)
    for n in range(1, M):
        for _ in range(24):
            # multiply by (1 - q^n)
            for k in range(M - 1, n - 1, -1):
                eta24[k] -= eta24[k - n]
    inv = [0] * M
    inv[0] = 1
    for k in range(1, M):
        inv[k] = -sum(eta24[i] * inv[k - i] for i in range(1, k + 1))
    return tuple(_series_mul(e4_cubed, inv, M))


def _series_mul(f, g, M):
    out = [0] * M
    for i, a in enumerate(f[:M]):
        if a:
            for k, b in enumerate(g[: M - i]):
                out[i + k] += a * b
    return out


def j_of_q(q: PadicNumber, coefficients: tuple[int, ...]) -> PadicNumber:
    """Evaluate j(q) = (1/q) * sum c_k q^k."""
    acc = PadicNumber.zero(q.p, q.absprec)
    for c in reversed(coefficients):
        acc = acc * q + c
    return acc / q


@dataclass(frozen=True)
class TatePeriod:
    p: int
    q: PadicNumber
    precision: int
    j_digits: int
    iterations: int
    terms: int

    @property
    def valuation(self) -> int:
        return int(self.q.valuation)


def tate_period(E: WeierstrassCurve, p: int, precision: int = DEFAULT_PRECISION) -> TatePeriod:
    """The Tate period q in pZ_p with j(q) = j(E), to ``precision`` significant digits."""
    data = reduction_type(E, p)
    if data.kind != SPLIT_MULTIPLICATIVE:
        raise NotSplitMultiplicativeError(f"{p}: reduction is {data.kind}, not split multiplicative")
    j = Fraction(E.j)
    n = -int(padic_valuation(j, p))
    assert n > 0
    absprec = n + precision
    terms = absprec // n + 1
    coeffs = j_expansion_coefficients(terms)
    work = precision + 2
    u = PadicNumber.from_rational(1 / j, p, work)

    def g(x: PadicNumber) -> PadicNumber:
        acc = PadicNumber.zero(p, x.absprec)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    q, iterations = u, 0
    while True:
        iterations += 1
        nxt = u * g(q)
        if nxt.agrees_with(q, absprec + 1) or iterations > absprec:
            q = nxt
            break
        q = nxt
    q = PadicNumber(p, q.valuation, q.unit % p**precision, q.valuation + precision)
    if q.valuation != n:
        raise ArithmeticError(f"v_p(q) = {q.valuation} but -v_p(j) = {n}")
    if not q.agrees_with(u, 2 * n):
        raise ArithmeticError("q is not congruent to 1/j modulo p^(2 v(q))")
    back = j_of_q(q, coeffs)
    diff = back - PadicNumber.from_rational(j, p, precision)
    j_digits = precision if diff.is_zero() else int(diff.valuation + n)
    if j_digits < precision - 2 * n:
        raise ArithmeticError(f"j-expansion re-evaluation agrees to only {j_digits} digits")
    return TatePeriod(p, q, precision, j_digits, iterations, terms)


__all__ = [
    "ADDITIVE",
    "AdditiveReductionError",
    "GOOD",
    "LocalReductionData",
    "NONSPLIT_MULTIPLICATIVE",
    "NotSplitMultiplicativeError",
    "SPLIT_MULTIPLICATIVE",
    "TamagawaProduct",
    "TatePeriod",
    "Transformation",
    "bad_primes",
    "conductor",
    "j_expansion_coefficients",
    "j_of_q",
    "local_data",
    "minimal_model_at",
    "reduction_type",
    "tamagawa_product",
    "tate_period",
]
