"""Dense univariate polynomials as coefficient tuples (constant term first).

Only what the torsion search needs.  Beyond ring operations this means
roots in Q or Q(sqrt d) of rational polynomials of degree <= 4.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..arith.integers import divisors, rational_sqrt

Poly = tuple


def trim(f: Sequence) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def degree(f: Sequence) -> int:
    return len(trim(f)) - 1


def add(f: Sequence, g: Sequence) -> Poly:
    n = max(len(f), len(g))
    return trim((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n))


def sub(f: Sequence, g: Sequence) -> Poly:
    return add(f, scale(g, -1))


def scale(f: Sequence, c) -> Poly:
    return trim(c * a for a in f)


def mul(f: Sequence, g: Sequence) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def evaluate(f: Sequence, x):
    acc = 0
    for a in reversed(f):
        acc = acc * x + a
    return acc


def divmod_poly(f: Sequence, g: Sequence) -> tuple[Poly, Poly]:
    """Quotient and remainder over a field (coefficients must support /)."""
    f, g = list(trim(f)), trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg, lead = len(g) - 1, g[-1]
    q = [0] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and f:
        c = f[-1] / lead
        k = len(f) - 1 - dg
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] = f[i + k] - c * b
        f = list(trim(f))
    return trim(q), trim(f)


def _integer_coefficients(f: Sequence) -> list[int]:
    f = [Fraction(a) for a in trim(f)]
    den = math.lcm(*(a.denominator for a in f))
    ints = [int(a * den) for a in f]
    g = math.gcd(*ints)
    return [a // g for a in ints]


def rational_roots(f: Sequence) -> list[Fraction]:
    """Distinct rational roots of a nonzero rational polynomial, ascending."""
    c = _integer_coefficients(f)
    if not c:
        raise ValueError("the zero polynomial has every root")
    roots = set()
    if c[0] == 0:
        roots.add(Fraction(0))
        while c[0] == 0:
            c = c[1:]
    n = len(c) - 1
    if n == 0:
        return sorted(roots)
    for num in divisors(c[0]):
        for den in divisors(c[-1]):
            if math.gcd(num, den) != 1:
                continue
            for s in (num, -num):
                # den^n f(s/den), all in integers
                total, pw_s, pw_d = 0, 1, den**n
                for a in c:
                    total += a * pw_s * pw_d
                    pw_s *= s
                    pw_d //= den
                if total == 0:
                    roots.add(Fraction(s, den))
    return sorted(roots)


def _deflate(f: Sequence, r) -> Poly:
    q, rem = divmod_poly(f, (-r, 1))
    if rem:
        raise ArithmeticError("deflation by a non-root")
    return q


def quadratic_factors(f: Sequence) -> list[Poly]:
    """Monic rational quadratic factors of a rational quartic without rational roots.

    The quartic is rescaled to a monic integer polynomial X^4 + A X^3 + B X^2
    + C X + D; a factorization (X^2 + sX + t)(X^2 + uX + w) over Z needs t | D,
    and then s, u are the roots of z^2 - A z + (B - t - w).
    """
    f = [Fraction(a) for a in trim(f)]
    if len(f) != 5:
        raise ValueError("quadratic_factors expects a quartic")
    monic = [a / f[-1] for a in f]
    L = math.lcm(*(a.denominator for a in monic))
    A, B, C, D = (int(monic[3 - k] * L ** (k + 1)) for k in range(4))
    if D == 0:
        raise ValueError("quartic has the rational root 0")
    found = []
    for t0 in divisors(D):
        for t in (t0, -t0):
            w = D // t
            disc = A * A - 4 * (B - t - w)
            if disc < 0:
                continue
            k = math.isqrt(disc)
            if k * k != disc or (A + k) % 2:
                continue
            for s in {(A + k) // 2, (A - k) // 2}:
                u = A - s
                if s * w + t * u == C:
                    # back to x = X / L
                    found.append((Fraction(t, L * L), Fraction(s, L), Fraction(1)))
    return sorted(set(found))


def roots_in_field(f: Sequence, field) -> list:
    """Distinct roots of a rational polynomial inside ``field`` (Q or Q(sqrt d)).

    Irrational roots are found only through quadratic factors, so polynomials
    of degree > 4 return their rational roots alone.
    """
    f = trim(Fraction(a) for a in f)
    roots = [field.coerce(r) for r in rational_roots(f)]
    g = f
    for r in rational_roots(f):
        while evaluate(g, r) == 0:
            g = _deflate(g, r)
    quads: list[Poly] = []
    if degree(g) == 2:
        quads = [g]
    elif degree(g) == 4:
        quads = quadratic_factors(g)
    for q in quads:
        c, b, a = q
        disc = b * b - 4 * a * c
        if rational_sqrt(disc) is not None:
            continue
        s = field.sqrt(field.coerce(disc))
        if s is None:
            continue
        for sign in (1, -1):
            roots.append((-b + sign * s) / (2 * a))
    out = []
    for r in roots:
        if r not in out:
            out.append(r)
    return out
