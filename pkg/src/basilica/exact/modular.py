"""Arithmetic modulo word-size primes, used for exact certificates.

Two kinds of certificates live here.

* Coprimality: if two monic integer polynomials are coprime modulo one prime,
  they are coprime over the rationals (a common factor over Q can be chosen
  monic with integer coefficients by Gauss's lemma, and it keeps its degree
  modulo every prime).  Squarefreeness is the same test applied to p and p'.
* Characteristic polynomials: Hessenberg reduction is run modulo enough primes
  to exceed twice a Hadamard-type bound on the coefficients, then the integer
  coefficients are recovered by Chinese remaindering.
"""

from __future__ import annotations

from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpz

from .poly import IntPoly

__all__ = [
    "primes_below",
    "poly_mod",
    "gcd_degree_mod",
    "coprime",
    "is_squarefree",
    "charpoly_mod",
    "charpoly_crt",
    "charpoly_coefficient_bound",
]

# products of two residues must stay well inside int64
PRIME_BITS = 25


@lru_cache(maxsize=None)
def primes_below(count: int, bits: int = PRIME_BITS) -> tuple[int, ...]:
    """The ``count`` largest primes below ``2**bits``, descending."""
    out = []
    p = (1 << bits) - 1
    while len(out) < count:
        if gmpy2.is_prime(p):
            out.append(p)
        p -= 2
    return tuple(out)


def poly_mod(poly: IntPoly, p: int) -> np.ndarray:
    """Coefficients reduced into [0, p), low degree first, as int64."""
    P = mpz(p)
    return np.array([int(c % P) for c in poly.coeffs], dtype=np.int64)


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def _rem_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = a.copy()
    db = len(b) - 1
    inv = pow(int(b[-1]), -1, p)
    for k in range(len(a) - 1, db - 1, -1):
        top = int(a[k])
        if top:
            f = (top * inv) % p
            a[k - db : k + 1] = (a[k - db : k + 1] - f * b) % p
    return _trim(a[:db])


def gcd_degree_mod(a: IntPoly, b: IntPoly, p: int) -> int:
    """Degree of gcd(a mod p, b mod p); -1 if both vanish modulo p."""
    x, y = _trim(poly_mod(a, p)), _trim(poly_mod(b, p))
    if len(x) < len(y):
        x, y = y, x
    while len(y):
        x, y = y, _rem_mod(x, y, p)
    return len(x) - 1


def coprime(a: IntPoly, b: IntPoly, tries: int = 3) -> bool:
    """Certified coprimality over Q for polynomials with unit-free leading terms.

    A single prime not dividing either leading coefficient with a trivial
    modular gcd is a proof.  If every tried prime reports a common factor the
    exact gcd decides.
    """
    if a.degree <= 0 or b.degree <= 0:
        return not (a.is_zero() and b.is_zero()) and (a.degree == 0 or b.degree == 0)
    for p in primes_below(tries + 4):
        if a.lc % p == 0 or b.lc % p == 0:
            continue
        if gcd_degree_mod(a, b, p) == 0:
            return True
        tries -= 1
        if tries == 0:
            break
    return a.gcd(b).degree == 0


def is_squarefree(a: IntPoly, tries: int = 3) -> bool:
    """Squarefree over Q (no repeated complex root)."""
    if a.degree <= 1:
        return True
    d = a.derivative()
    for p in primes_below(tries + 4):
        if a.lc % p == 0 or a.degree % p == 0:
            continue
        if gcd_degree_mod(a, d, p) == 0:
            return True
        tries -= 1
        if tries == 0:
            break
    return a.gcd(d).degree == 0


# --- characteristic polynomials -------------------------------------------------


def _hessenberg_mod(m: np.ndarray, p: int) -> np.ndarray:
    """Upper Hessenberg matrix similar to ``m`` modulo p."""
    h = m.copy() % p
    n = h.shape[0]
    for j in range(n - 2):
        col = h[j + 1 :, j]
        nz = np.flatnonzero(col)
        if not nz.size:
            continue
        piv = j + 1 + int(nz[0])
        if piv != j + 1:
            h[[piv, j + 1], :] = h[[j + 1, piv], :]
            h[:, [piv, j + 1]] = h[:, [j + 1, piv]]
        inv = pow(int(h[j + 1, j]), -1, p)
        factors = (h[j + 2 :, j] * inv) % p
        rows = np.flatnonzero(factors)
        if not rows.size:
            continue
        idx = j + 2 + rows
        f = factors[rows]
        # row_i -= f_i * row_{j+1}; then col_{j+1} += f_i * col_i
        h[idx, :] = (h[idx, :] - np.outer(f, h[j + 1, :]) % p) % p
        h[:, j + 1] = (h[:, j + 1] + _matvec_mod(h[:, idx], f, p)) % p
    return h


def _matvec_mod(a: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    # keep partial sums below 2**62
    chunk = max(1, 1 << (62 - 2 * PRIME_BITS))
    out = np.zeros(a.shape[0], dtype=np.int64)
    for s in range(0, len(v), chunk):
        out = (out + a[:, s : s + chunk] @ v[s : s + chunk]) % p
    return out


def charpoly_mod(m: np.ndarray, p: int) -> np.ndarray:
    """Coefficients of det(x I - m) modulo p, low degree first."""
    n = m.shape[0]
    h = _hessenberg_mod(np.asarray(m, dtype=np.int64), p)
    polys = [np.zeros(n + 1, dtype=np.int64)]
    polys[0][0] = 1
    for k in range(1, n + 1):
        prev = polys[k - 1]
        # (x - h_kk) * p_{k-1}
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur - (h[k - 1, k - 1] * prev) % p) % p
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = (prod * int(h[i, i - 1])) % p
            if not prod:
                break
            t = (int(h[i - 1, k - 1]) * prod) % p
            if t:
                cur = (cur - (t * polys[i - 1]) % p) % p
        polys.append(cur)
    return polys[n]


def charpoly_coefficient_bound(m) -> mpz:
    """Bound on |coefficients| of det(x I - m) (Hadamard on principal minors)."""
    rows = [sum(int(x) * int(x) for x in row) for row in np.asarray(m, dtype=object)]
    b = gmpy2.isqrt(mpz(max(rows) if rows else 0)) + 1
    return (b + 1) ** len(rows)


def charpoly_crt(m) -> IntPoly:
    """Exact characteristic polynomial det(x I - m) of an integer matrix."""
    arr = np.asarray(m, dtype=object)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return IntPoly([1])
    bound = 2 * charpoly_coefficient_bound(arr) + 1
    modulus = mpz(1)
    residues = None
    for p in primes_below(bound.bit_length() // (PRIME_BITS - 1) + 2):
        local = np.array([[int(x) % p for x in row] for row in arr], dtype=np.int64)
        cp = charpoly_mod(local, p)
        residues = _crt_join(residues, modulus, cp, p)
        modulus *= p
        if modulus > bound:
            break
    half = modulus // 2
    coeffs = [c - modulus if c > half else c for c in residues]
    return IntPoly(coeffs)


def _crt_join(residues, modulus: mpz, cp: np.ndarray, p: int):
    if residues is None:
        return [mpz(int(c)) for c in cp]
    inv = int(gmpy2.invert(modulus % p, p))
    out = []
    for r, c in zip(residues, cp):
        t = ((int(c) - int(r % p)) * inv) % p
        out.append(r + modulus * t)
    return out
