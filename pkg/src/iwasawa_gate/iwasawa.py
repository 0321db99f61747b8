"""Valuation formulas for f(0) at a prime p split in K, and the group-order checks they rest on.

f is a characteristic-ideal generator of the dual Selmer group over the
cyclotomic Z_p-extension.  Only its valuation at 0 is represented, through
Greenberg's formulas:

* ordinary:        sum v(c_v) + 2 sum v(#E~(F_v)) + v(#Sel) - 2 v(#E(K)_p)
* multiplicative:  sum v(l_v) + sum v(c_v) + v(#Sel) - 2 v(#E(K)_p)

The inference "v_p(f(0)) = 0 implies lambda = 0" is recorded as an imported
implication, never computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

from .arith.integers import factorize, int_valuation, is_prime
from .arith.padic import DEFAULT_PRECISION, padic_log
from .curve.counting import count_points, trace_of_frobenius
from .curve.torsion import TorsionStructure, torsion_subgroup
from .curve.weierstrass import WeierstrassCurve, as_field
from .localred import (
    GOOD,
    NONSPLIT_MULTIPLICATIVE,
    SPLIT_MULTIPLICATIVE,
    LocalReductionData,
    reduction_type,
    tate_period,
)
from .quadfield import SPLIT, QuadPrime, local_degrees, splitting_type

ORDINARY_CASE, MULTIPLICATIVE_CASE, SUPERSINGULAR_CASE = 1, 2, 3
CASE_NAMES = {ORDINARY_CASE: "ordinary", MULTIPLICATIVE_CASE: "multiplicative", SUPERSINGULAR_CASE: "supersingular"}

LAMBDA_ZERO = "lambda=0"
INCONCLUSIVE = "inconclusive"
INCOMPLETE = "incomplete"

COMPUTED, EXTERNAL, ASSUMPTION = "computed", "external", "assumption"


class AssumptionViolation(ValueError):
    """A hypothesis of the certification (odd p, p split in K, ...) does not hold."""


class ClaimViolation(ArithmeticError):
    """A computed value contradicts a claim the pipeline treats as checkable."""


# case classification

@dataclass(frozen=True)
class CaseClassification:
    case: int
    p: int
    d: int
    places: tuple[LocalReductionData, ...]
    a_p: int

    @property
    def name(self) -> str:
        return CASE_NAMES[self.case]

    @property
    def hypothesis_ok(self) -> bool:
        """Case 3 needs a_p = 0; the other cases carry no extra hypothesis here."""
        return self.case != SUPERSINGULAR_CASE or self.a_p == 0


def _require_split(K, p: int) -> tuple[QuadPrime, ...]:
    if p == 2 or not is_prime(p):
        raise AssumptionViolation(f"p = {p} is not an odd prime")
    places = splitting_type(K, p)
    if places[0].splitting != SPLIT:
        raise AssumptionViolation(f"{p} is {places[0].splitting} in Q(sqrt {K.d}), not split")
    return places


def classify_case(E: WeierstrassCurve, K, p: int) -> CaseClassification:
    K = as_field(K)
    places = _require_split(K, p)
    data = tuple(reduction_type(E, v, K) for v in places)
    kinds = {r.kind for r in data}
    if len(kinds) != 1:
        raise AssumptionViolation(f"places above {p} carry different reduction types {sorted(kinds)}")
    kind = data[0].kind
    if kind == GOOD:
        a_p = trace_of_frobenius(E, p)
        case = SUPERSINGULAR_CASE if a_p % p == 0 else ORDINARY_CASE
    else:
        a_p = 1 if kind == SPLIT_MULTIPLICATIVE else -1
        case = MULTIPLICATIVE_CASE
    return CaseClassification(case, p, K.d, data, a_p)


# Greenberg formulas

@dataclass(frozen=True)
class GreenbergTerm:
    label: str
    value: Optional[int]
    valuation: int
    weight: int
    source: str

    @property
    def contribution(self) -> int:
        return self.weight * self.valuation


@dataclass(frozen=True)
class GreenbergResult:
    p: int
    case: int
    terms: tuple[GreenbergTerm, ...]
    valuation: Optional[int]
    lambda_conclusion: str
    missing: tuple[str, ...] = ()
    precision: dict = field(default_factory=dict, compare=False)
    # lambda = 0 is inferred from v_p(f(0)) = 0 by an imported theorem, not recomputed
    implication: str = "v_p(f(0)) = 0 => lambda = 0 (imported)"

    @property
    def complete(self) -> bool:
        return self.valuation is not None


@dataclass(frozen=True)
class GreenbergInputs:
    """Inputs with provenance; ``selmer_order=None`` marks a missing Selmer datum."""

    tamagawa: Sequence[int]
    torsion_order: int
    selmer_order: Optional[int]
    reduction_counts: Sequence[int] = ()
    lv_factors: Sequence["LvFactor"] = ()
    selmer_source: str = ASSUMPTION
    torsion_source: str = COMPUTED


def _term(label, value, p, weight, source) -> GreenbergTerm:
    if value <= 0:
        raise ValueError(f"{label} must be a positive integer, got {value}")
    return GreenbergTerm(label, value, int_valuation(value, p), weight, source)


def _finish(p: int, case: int, terms: list[GreenbergTerm], inputs: GreenbergInputs, precision=None) -> GreenbergResult:
    if inputs.selmer_order is None:
        return GreenbergResult(p, case, tuple(terms), None, INCOMPLETE, ("selmer_order",), precision or {})
    terms.append(_term("#Sel(E/K)_p", inputs.selmer_order, p, 1, inputs.selmer_source))
    terms.append(_term("#E(K)_tors", inputs.torsion_order, p, -2, inputs.torsion_source))
    total = sum(t.contribution for t in terms)
    if total < 0:
        raise ClaimViolation(f"v_p(f(0)) = {total} < 0: inputs are inconsistent")
    return GreenbergResult(p, case, tuple(terms), total, LAMBDA_ZERO if total == 0 else INCONCLUSIVE, (), precision or {})


def greenberg_ordinary(inputs: GreenbergInputs, p: int) -> GreenbergResult:
    terms = [_term(f"c_v[{i}]", c, p, 1, COMPUTED) for i, c in enumerate(inputs.tamagawa)]
    terms += [_term(f"#E~(F_v)[{i}]", n, p, 2, COMPUTED) for i, n in enumerate(inputs.reduction_counts)]
    return _finish(p, ORDINARY_CASE, terms, inputs)


def greenberg_multiplicative(inputs: GreenbergInputs, p: int) -> GreenbergResult:
    terms = [GreenbergTerm(f"l_v[{f.place}]", f.value, f.valuation, 1, COMPUTED) for f in inputs.lv_factors]
    terms += [_term(f"c_v[{i}]", c, p, 1, COMPUTED) for i, c in enumerate(inputs.tamagawa)]
    precision = {str(f.place): f.precisions for f in inputs.lv_factors if f.precisions}
    return _finish(p, MULTIPLICATIVE_CASE, terms, inputs, precision)


# l_v factors

@dataclass(frozen=True)
class LvFactor:
    place: QuadPrime
    kind: str
    valuation: int
    value: Optional[int] = None
    ratio_valuation: Optional[int] = None
    precisions: tuple[int, ...] = ()


def _ratio_valuation(E: WeierstrassCurve, p: int, precision: int) -> int:
    T = tate_period(E, p, precision)
    log_q = padic_log(T.q)
    if log_q.is_zero():
        raise ClaimViolation(f"log_p(q) vanishes to precision {precision}")
    # ord_p(q) is an ordinary integer; its own p-adic valuation comes off the ratio
    return int(log_q.valuation) - int_valuation(T.valuation, p)


def lv_factor(E: WeierstrassCurve, K, p: int, v: QuadPrime, precision: int = DEFAULT_PRECISION) -> LvFactor:
    K = as_field(K)
    if v.p != p or v.splitting != SPLIT:
        raise AssumptionViolation(f"{v} is not a split place above {p}")
    data = reduction_type(E, v, K)
    if data.kind == NONSPLIT_MULTIPLICATIVE:
        return LvFactor(v, data.kind, int_valuation(2, p), 2)
    if data.kind != SPLIT_MULTIPLICATIVE:
        raise AssumptionViolation(f"{E} has {data.kind} reduction at {v}")
    ratios = {N: _ratio_valuation(E, p, N) for N in (precision, 2 * precision)}
    if len(set(ratios.values())) != 1:
        raise ClaimViolation(f"ratio valuation depends on precision: {ratios}")
    ratio = ratios[precision]
    if ratio != 1:
        raise ClaimViolation(f"log_p(q)/ord_p(q) has valuation {ratio}, expected exactly 1")
    f_unr, f_cyc = local_degrees(K, v)
    # l_v = ratio * f_unr / (2 p f_cyc)
    val = ratio + int_valuation(f_unr, p) - int_valuation(2 * p * f_cyc, p)
    return LvFactor(v, data.kind, val, None, ratio, tuple(ratios))


# Hasse obstruction

@dataclass(frozen=True)
class HasseCertificate:
    p: int
    count: int
    torsion_order: int
    direct: bool
    window: bool

    @property
    def holds(self) -> bool:
        return self.direct and self.window


def hasse_window_excludes(t: int, p: int) -> bool:
    """t*p > p + 1 + 2 sqrt(p), decided in integers."""
    a = t * p - p - 1
    return a > 0 and a * a > 4 * p


@lru_cache(maxsize=None)
def _rational_torsion_order(E: WeierstrassCurve) -> int:
    return torsion_subgroup(E).order


def hasse_obstruction(E: WeierstrassCurve, p: int) -> HasseCertificate:
    """p does not divide #E(F_p): by counting, and by the torsion-plus-Hasse-window argument."""
    N = count_points(E, p)
    t = _rational_torsion_order(E)
    direct = N % p != 0
    # t | N since torsion injects; if also p | N then t*p | N, but t*p leaves the window
    window = N % t == 0 and math.gcd(t, p) == 1 and hasse_window_excludes(t, p)
    return HasseCertificate(p, N, t, direct, window)


# GL2 arithmetic

def gl2_order(l: int) -> int:
    if not is_prime(l):
        raise ValueError(f"{l} is not prime")
    return l * (l + 1) * (l - 1) ** 2


def gl2_order_bruteforce(l: int) -> int:
    return sum(1 for a, b, c, d in product(range(l), repeat=4) if (a * d - b * c) % l)


@dataclass(frozen=True)
class DivisibilityRecord:
    l: int
    p: int
    target: int
    two_valuation: int
    odd_part: int
    solvable: bool

    @property
    def certified(self) -> bool:
        """No n >= 0 with (l+1)(l-1) | 2 p^n."""
        return not self.solvable


def gl2_divisibility_check(l: int, p: int) -> DivisibilityRecord:
    """Decide whether (l+1)(l-1) divides 2 p^n for some n >= 0."""
    if not is_prime(l) or not is_prime(p):
        raise ValueError("l and p must be prime")
    m = (l + 1) * (l - 1)
    k = int_valuation(m, 2)
    odd = m >> k
    odd_primes = [q for q, _ in factorize(odd)] if odd > 1 else []
    solvable = k <= 1 and all(q == p for q in odd_primes)
    return DivisibilityRecord(l, p, m, k, odd, solvable)


@dataclass(frozen=True)
class StabilityRecord:
    d: int
    p: int
    torsion_q: TorsionStructure
    torsion_k: TorsionStructure
    odd_primes_checked: tuple[int, ...]
    certified: bool
    # group theory taken as given: pro-2 image mod 2, surjective mod-l images
    imported: tuple[str, ...] = ("2-power: mod-2 image is pro-2 and p is odd", "odd l: mod-l image is GL2(F_l)")


def torsion_stability(E: WeierstrassCurve, K, p: int, torsion_q: TorsionStructure = None,
                      torsion_k: TorsionStructure = None, l_max: int = 97) -> StabilityRecord:
    """Certify E(K)_tors = E(K_inf)_tors modulo the imported group theory."""
    if p == 2 or not is_prime(p):
        raise AssumptionViolation("torsion stability needs an odd prime p")
    K = as_field(K)
    torsion_q = torsion_q or torsion_subgroup(E)
    torsion_k = torsion_k or torsion_subgroup(E, K)
    ls = tuple(l for l in range(3, l_max + 1) if is_prime(l))
    divisibility_ok = all(gl2_divisibility_check(l, p).certified for l in ls)
    odd_q = torsion_q.order >> int_valuation(torsion_q.order, 2)
    odd_k = torsion_k.order >> int_valuation(torsion_k.order, 2)
    return StabilityRecord(K.d, p, torsion_q, torsion_k, ls, divisibility_ok and odd_q == odd_k)


__all__ = [
    "ASSUMPTION",
    "AssumptionViolation",
    "COMPUTED",
    "CaseClassification",
    "ClaimViolation",
    "EXTERNAL",
    "GreenbergInputs",
    "GreenbergResult",
    "GreenbergTerm",
    "HasseCertificate",
    "INCOMPLETE",
    "INCONCLUSIVE",
    "LAMBDA_ZERO",
    "DivisibilityRecord",
    "LvFactor",
    "MULTIPLICATIVE_CASE",
    "ORDINARY_CASE",
    "SUPERSINGULAR_CASE",
    "StabilityRecord",
    "classify_case",
    "gl2_order",
    "gl2_order_bruteforce",
    "greenberg_multiplicative",
    "greenberg_ordinary",
    "hasse_obstruction",
    "hasse_window_excludes",
    "gl2_divisibility_check",
    "lv_factor",
    "torsion_stability",
]
