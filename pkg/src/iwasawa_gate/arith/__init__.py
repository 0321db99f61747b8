"""Exact arithmetic backbone: rationals, factorization, finite fields, p-adics."""

from fractions import Fraction as ExactRational

from .finite import (
    GF,
    Fp2Element,
    PrimeFieldElement,
    finite_field_sqrt_exists,
    hensel_sqrt,
    legendre,
    sqrt_mod,
)
from .integers import (
    Factorization,
    divisors,
    factorize,
    int_valuation,
    is_power_of_two,
    is_prime,
    is_squarefree,
    kronecker_symbol,
    next_prime,
    padic_valuation,
    primes_up_to,
    rational_sqrt,
)
from .padic import DEFAULT_PRECISION, PadicNumber, padic_log

__all__ = [
    "DEFAULT_PRECISION",
    "ExactRational",
    "Factorization",
    "Fp2Element",
    "GF",
    "PadicNumber",
    "PrimeFieldElement",
    "divisors",
    "factorize",
    "finite_field_sqrt_exists",
    "hensel_sqrt",
    "int_valuation",
    "is_power_of_two",
    "is_prime",
    "is_squarefree",
    "kronecker_symbol",
    "legendre",
    "next_prime",
    "padic_log",
    "padic_valuation",
    "primes_up_to",
    "rational_sqrt",
    "sqrt_mod",
]
