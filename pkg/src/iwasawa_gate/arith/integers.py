"""Exact integer and rational helpers such as factorization and the Kronecker symbol."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

Rational = Union[int, Fraction]

TRIAL_DIVISION_LIMIT = 10**6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=None)
def primes_up_to(n: int) -> tuple[int, ...]:
    """All primes <= n by an Eratosthenes sieve."""
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    m = max(n + 1, 2)
    while not is_prime(m):
        m += 1
    return m


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _factor_positive(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    limit = min(TRIAL_DIVISION_LIMIT, math.isqrt(n))
    for q in primes_up_to(TRIAL_DIVISION_LIMIT):
        if q > limit:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out[q] = e
            limit = min(limit, math.isqrt(n))
    if n == 1:
        return out
    # seeded so factorizations are reproducible run to run
    rng = random.Random(n)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        g = _pollard_brent(m, rng)
        stack.extend((g, m // g))
    return out


@dataclass(frozen=True)
class Factorization:
    """Signed factorization ``sign * prod(prime**exponent)``; exponents may be negative."""

    sign: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [q for q, _ in self.pairs]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        if any(e == 0 for _, e in self.pairs):
            raise ValueError("exponents must be nonzero")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def value(self) -> Fraction:
        out = Fraction(self.sign)
        for q, e in self.pairs:
            out *= Fraction(q) ** e
        return out

    def __str__(self) -> str:
        if not self.pairs:
            return "-1" if self.sign < 0 else "1"
        body = " * ".join(f"{q}^{e}" if e != 1 else str(q) for q, e in self.pairs)
        return ("-" if self.sign < 0 else "") + body


def factorize(n: Rational) -> Factorization:
    """Factor a nonzero integer or rational; denominator primes get negative exponents."""
    x = Fraction(n)
    if x == 0:
        raise ValueError("cannot factor zero")
    exps = _factor_positive(abs(x.numerator))
    for q, e in _factor_positive(x.denominator).items():
        exps[q] = exps.get(q, 0) - e
    return Factorization(1 if x > 0 else -1, tuple(sorted(exps.items())))


def divisors(n: int) -> list[int]:
    """Positive divisors of a nonzero integer, ascending."""
    divs = [1]
    for q, e in factorize(abs(n)):
        divs = [dv * q**k for dv in divs for k in range(e + 1)]
    return sorted(divs)


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x: Rational, p: int) -> int:
    """v_p(numerator) - v_p(denominator) of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is infinite")
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def prime_to_part(n: int, p: int) -> int:
    """n with every factor of p removed."""
    return n // p ** int_valuation(n, p)


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a | n), extending the Jacobi symbol to all n != 0."""
    if n == 0:
        raise ValueError("Kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a | n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(abs(n)))


def rational_sqrt(x: Rational) -> Fraction | None:
    """Exact square root in Q, or None when x is not a rational square."""
    x = Fraction(x)
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0
