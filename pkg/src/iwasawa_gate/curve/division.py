"""Division polynomials of a long Weierstrass curve.

With psi_2 = 2y + a1x + a3 and psi_2^2 = 4x^3 + b2x^2 + 2b4x + b6, every
psi_n is f_n(x) for odd n and psi_2 * f_n(x) for even n.  The functions
here return the x-polynomial f_n.
"""

from __future__ import annotations

from functools import lru_cache

from . import polynomials as P
from .weierstrass import CurvePoint, WeierstrassCurve

MAX_N = 16


def psi2_squared(E: WeierstrassCurve) -> tuple:
    inv = E.invariants()
    return P.trim((inv.b6, 2 * inv.b4, inv.b2, 4))


def division_polynomial(E: WeierstrassCurve, n: int) -> tuple:
    """f_n with psi_n = f_n (n odd) or psi_n = psi_2 * f_n (n even); coefficients low to high."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"division polynomials are provided for 0 <= n <= {MAX_N}")
    return _table(E, n)[n]


@lru_cache(maxsize=64)
def _table(E: WeierstrassCurve, n: int) -> tuple:
    inv = E.invariants()
    b2, b4, b6, b8 = inv.b2, inv.b4, inv.b6, inv.b8
    F2 = P.mul(psi2_squared(E), psi2_squared(E))
    f = [(), (1,), (1,),
         P.trim((b8, 3 * b6, 3 * b4, b2, 3)),
         P.trim((b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2))]
    for k in range(5, max(n, 4) + 1):
        m = k // 2
        if k % 2:
            a = P.mul(f[m + 2], P.mul(f[m], P.mul(f[m], f[m])))
            b = P.mul(f[m - 1], P.mul(f[m + 1], P.mul(f[m + 1], f[m + 1])))
            if m % 2 == 0:
                a = P.mul(F2, a)
            else:
                b = P.mul(F2, b)
            f.append(P.sub(a, b))
        else:
            inner = P.sub(P.mul(f[m + 2], P.mul(f[m - 1], f[m - 1])),
                          P.mul(f[m - 2], P.mul(f[m + 1], f[m + 1])))
            f.append(P.mul(f[m], inner))
    return tuple(f)


def psi(E: WeierstrassCurve, n: int, point: CurvePoint):
    """psi_n evaluated at an affine point (includes the psi_2 factor for even n)."""
    value = P.evaluate(division_polynomial(E, n), point.x)
    if n % 2 == 0:
        value = value * (2 * point.y + E.a1 * point.x + E.a3)
    return value
