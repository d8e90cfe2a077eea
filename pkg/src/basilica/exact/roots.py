"""Exact real root counting and isolation.

Two certificates are used for "exactly one root in (lo, hi]".

``sturm``
    The Sturm sequence of the squarefree part gives the count directly.
``sign-count``
    For a squarefree polynomial of degree d, d disjoint intervals with
    opposite nonzero endpoint signs each contain at least one root, and there
    are at most d roots, so each contains exactly one.  This only needs exact
    sign evaluations and is what makes degrees in the thousands tractable.
    The points at which signs are tested usually come from a floating point
    eigensolver; correctness does not depend on their accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

from .modular import is_squarefree
from .poly import IntPoly, as_mpq

__all__ = [
    "IsolatingInterval",
    "IsolationError",
    "sturm_sequence",
    "sturm_count",
    "sign_variations",
    "isolate_roots",
    "cluster_points",
    "refine",
    "dyadic_near",
]


class IsolationError(RuntimeError):
    """Seeded isolation could not account for every root."""


@dataclass(frozen=True)
class IsolatingInterval:
    """Half-open interval (lo, hi] holding exactly one root of ``poly``.

    ``sign_lo`` and ``sign_hi`` are the exact signs of ``poly`` at the
    endpoints; they are nonzero and opposite for every interval produced here.
    """

    poly: IntPoly
    lo: mpq
    hi: mpq
    sign_lo: int
    sign_hi: int
    method: str = "sturm"

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    @property
    def midpoint(self) -> mpq:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint)

    def contains(self, x) -> bool:
        x = as_mpq(x)
        return self.lo < x <= self.hi

    def __repr__(self) -> str:
        return f"IsolatingInterval(deg {self.poly.degree}, ({float(self.lo):.15g}, {float(self.hi):.15g}])"


def dyadic_near(x: float, bits: int = 60) -> mpq:
    """A dyadic rational within 2**-bits of the float ``x``."""
    return mpq(mpz(round(x * (1 << bits))), mpz(1) << bits)


# --- Sturm sequences -------------------------------------------------------------


def sturm_sequence(p: IntPoly) -> list[IntPoly]:
    """Sturm sequence of the squarefree part of ``p``.

    Remainders are made primitive at each step; positive rescaling does not
    change sign variations.
    """
    if p.degree < 1:
        return [p]
    sf = p if is_squarefree(p) else p.squarefree_part()
    first = sf if sf.lc > 0 else -sf
    seq = [first, first.derivative()]
    while seq[-1].degree > 0:
        a, b = seq[-2], seq[-1]
        r = a.pseudo_rem(b)
        if r.is_zero():
            break
        # prem multiplies by lc(b)**(deg a - deg b + 1); undo a negative sign
        if b.lc < 0 and (a.degree - b.degree + 1) % 2 == 1:
            r = -r
        g = r.content()
        seq.append(IntPoly._raw([-(c // g) for c in r.coeffs]))
    return seq


def _sign_at(p: IntPoly, x) -> int:
    if x == "inf":
        return (p.lc > 0) - (p.lc < 0)
    if x == "-inf":
        s = (p.lc > 0) - (p.lc < 0)
        return s if p.degree % 2 == 0 else -s
    return p.sign_at(x)


def sign_variations(seq: Sequence[IntPoly], x) -> int:
    """Sign changes in the sequence evaluated at x (zeros dropped)."""
    last = 0
    count = 0
    for q in seq:
        s = _sign_at(q, x)
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def sturm_count(p: IntPoly, lo, hi, seq: Sequence[IntPoly] | None = None) -> int:
    """Number of distinct real roots of ``p`` in (lo, hi].

    ``lo`` and ``hi`` are rationals or the strings ``"-inf"`` / ``"inf"``.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    if seq is None:
        seq = sturm_sequence(p)
    lo = lo if isinstance(lo, str) else as_mpq(lo)
    hi = hi if isinstance(hi, str) else as_mpq(hi)
    return sign_variations(seq, lo) - sign_variations(seq, hi)


# --- isolation -------------------------------------------------------------------


def _nonroot_split(p: IntPoly, lo: mpq, hi: mpq) -> mpq:
    mid = (lo + hi) / 2
    k = 3
    while p.sign_at(mid) == 0:
        mid = lo + (hi - lo) * mpq(k, 2 * k + 1)
        k += 1
    return mid


def isolate_roots(p: IntPoly, lo, hi) -> list[IsolatingInterval]:
    """Isolate every distinct root of ``p`` in (lo, hi] by Sturm bisection.

    Returned intervals are sorted and refine (lo, hi]; endpoints at which
    ``p`` vanishes are nudged so that endpoint signs are nonzero.
    """
    lo, hi = as_mpq(lo), as_mpq(hi)
    if not lo < hi:
        raise ValueError("empty search interval")
    if p.degree < 1:
        return []
    seq = sturm_sequence(p)
    sf = seq[0]
    # make the outer endpoints non-roots without losing roots of (lo, hi]
    if sf.sign_at(hi) == 0:
        step = (hi - lo) / 2
        while sturm_count(sf, hi, hi + step, seq) or sf.sign_at(hi + step) == 0:
            step /= 2
        hi = hi + step
    if sf.sign_at(lo) == 0:
        step = (hi - lo) / 2
        while sturm_count(sf, lo, lo + step, seq) or sf.sign_at(lo + step) == 0:
            step /= 2
        # lo itself is excluded, so shift to just above it
        lo = lo + step
    out: list[IsolatingInterval] = []
    stack = [(lo, hi, sign_variations(seq, lo), sign_variations(seq, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(sf, a, b, sf.sign_at(a), sf.sign_at(b), "sturm"))
            continue
        m = _nonroot_split(sf, a, b)
        vm = sign_variations(seq, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine(iv: IsolatingInterval, width) -> IsolatingInterval:
    """Shrink an isolating interval by sign bisection until ``hi - lo <= width``."""
    width = mpq(width) if isinstance(width, float) else as_mpq(width)
    p = iv.poly
    lo, hi, slo, shi = iv.lo, iv.hi, iv.sign_lo, iv.sign_hi
    if slo == 0 or shi == 0 or slo == shi:
        raise ValueError("refinement needs opposite nonzero endpoint signs")
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = p.sign_at(mid)
        if s == 0:
            # the root is exactly the midpoint
            q = (hi - lo) / 4
            lo, hi = mid - q, mid + q
            slo, shi = p.sign_at(lo), p.sign_at(hi)
            continue
        if s == slo:
            lo = mid
        else:
            hi, shi = mid, s
    return replace(iv, lo=lo, hi=hi, sign_lo=slo, sign_hi=shi)


def cluster_points(points: Iterable[float], tol: float) -> list[tuple[float, float]]:
    """Group sorted points whose consecutive differences are at most ``tol``.

    Returns ``(first, last)`` for every group.
    """
    pts = sorted(float(p) for p in points)
    out: list[tuple[float, float]] = []
    for p in pts:
        if out and p - out[-1][1] <= tol:
            out[-1] = (out[-1][0], p)
        else:
            out.append((p, p))
    return out
