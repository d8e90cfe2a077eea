"""Exact arithmetic substrate: integer polynomials, rational functions, determinants, roots."""

from .charpoly import charpoly
from .poly import LAMBDA, ONE, ZERO, IntPoly, NotDivisibleError
from .rational import RationalFunction
from .roots import IsolatingInterval, isolate_roots, refine, sturm_count

__all__ = [
    "IntPoly",
    "IsolatingInterval",
    "LAMBDA",
    "NotDivisibleError",
    "ONE",
    "RationalFunction",
    "ZERO",
    "charpoly",
    "isolate_roots",
    "refine",
    "sturm_count",
]
