"""Weierstrass curves over Q and real quadratic fields, with reduction to F_p."""

from .counting import (
    ORDINARY,
    SUPERSINGULAR,
    BadReductionError,
    count_points,
    group_structure,
    ordinary_or_supersingular,
    trace_of_frobenius,
)
from .division import division_polynomial, psi, psi2_squared
from .torsion import (
    TorsionBoundsError,
    TorsionStructure,
    auxiliary_primes,
    halve_point,
    torsion_subgroup,
    torsion_upper_bound,
    two_torsion_points,
)
from .weierstrass import (
    CURVES,
    INFINITY,
    CurvePoint,
    Invariants,
    SingularCurveError,
    WeierstrassCurve,
    add,
    as_field,
    invariants,
    multiply,
    negate,
)

__all__ = [
    "BadReductionError",
    "CURVES",
    "CurvePoint",
    "INFINITY",
    "Invariants",
    "ORDINARY",
    "SUPERSINGULAR",
    "SingularCurveError",
    "TorsionBoundsError",
    "TorsionStructure",
    "WeierstrassCurve",
    "add",
    "as_field",
    "auxiliary_primes",
    "count_points",
    "division_polynomial",
    "group_structure",
    "halve_point",
    "invariants",
    "multiply",
    "negate",
    "ordinary_or_supersingular",
    "psi",
    "psi2_squared",
    "torsion_subgroup",
    "torsion_upper_bound",
    "trace_of_frobenius",
    "two_torsion_points",
]
