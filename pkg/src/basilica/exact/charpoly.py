"""Exact characteristic polynomials of integer matrices.

This is the independent oracle against which every recursion is checked, so it
deliberately knows nothing about graphs.
"""

from __future__ import annotations

import numpy as np

from .modular import charpoly_crt
from .poly import LAMBDA, ONE, ZERO, IntPoly

__all__ = ["charpoly", "charpoly_bareiss", "charpoly_crt"]

# above this size the modular route is far faster than elimination over Z[x]
BAREISS_MAX = 14


def charpoly_bareiss(m) -> IntPoly:
    """det(x I - m) by fraction-free (Bareiss) elimination over Z[x].

    The leading principal minors of x I - m are monic of full degree, so the
    pivots never vanish and no row exchanges are needed.
    """
    arr = np.asarray(m, dtype=object)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return ONE
    a = [[(LAMBDA if i == j else ZERO) - int(arr[i, j]) for j in range(n)] for i in range(n)]
    prev = ONE
    for k in range(n - 1):
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
        prev = piv
    return a[n - 1][n - 1]


def charpoly(m, method: str = "auto") -> IntPoly:
    """det(x I - m) for a square integer matrix.

    ``method`` is ``"bareiss"``, ``"modular"`` (Hessenberg reduction modulo
    primes with Chinese remaindering against a Hadamard bound) or ``"auto"``.
    Both are exact.
    """
    arr = np.asarray(m, dtype=object)
    if arr.size == 0:
        return ONE
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    if method == "auto":
        method = "bareiss" if arr.shape[0] <= BAREISS_MAX else "modular"
    if method == "bareiss":
        return charpoly_bareiss(arr)
    if method == "modular":
        return charpoly_crt(arr)
    raise ValueError(f"unknown method {method!r}")
