"""Certify the vanishing of Iwasawa lambda-invariants for the conductor-15 curves 15a1, 15a3 over real quadratic fields."""

__version__ = "0.1.0"
