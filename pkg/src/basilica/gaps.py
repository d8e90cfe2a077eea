"""Certified spectral gaps from the escape criterion of the zeta dynamics.

If ``|zeta_{k-1}| > 2`` and ``|zeta_k| > 2`` at a point where gamma_1 ..
gamma_k do not vanish, then ``|zeta_m| -> infinity`` and no gamma_m vanishes
there, so the point is outside the Dirichlet spectrum of every G_m.  A gap
certificate establishes this uniformly on an interval by one of two routes:

``exact``
    Sturm counts show gamma_1 .. gamma_k have no root in the interval, and
    ``p_j = gamma_j^2 - 4 eta_j^2`` (j = k-1, k) has no root there and is
    positive at the midpoint.  Exact but limited to small k by the cost of
    Sturm sequences.
``interval``
    The interval is bisected into pieces on each of which outward-rounded
    enclosures of zeta_1 .. zeta_k exclude 0 and the last two exceed 2 in
    absolute value.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import mpmath
from gmpy2 import mpq

from .dynamics import escape_depth
from .exact.poly import IntPoly
from .exact.roots import IsolatingInterval, sturm_count, sturm_sequence
from .recursion import SpectralSequence, zeta_step
from .spectrum import SEARCH_HI, GammaSigns, SpectrumIsolation

__all__ = [
    "EXACT_MAX_DEPTH",
    "GapCertificate",
    "GapFailure",
    "GapCertifier",
    "GapSide",
    "certify_gap",
    "gap_side",
    "gap_enumerate",
    "escape_samples",
    "gaps_to_csv",
]

# Sturm sequences of gamma_k^2 - 4 eta_k^2 get expensive beyond this depth
EXACT_MAX_DEPTH = 8
MIN_DEPTH = 3
# failed pieces are attributed to a known eigenvalue only for levels up to this
CLASSIFY_MAX_LEVEL = 12


@dataclass(frozen=True)
class GapCertificate:
    """Proof that (lo, hi) contains no root of any gamma_m.

    ``low_level_witnesses`` are the Sturm counts (all zero) of gamma_1 ..
    gamma_{k-2} and ``positivity_witnesses`` hold ``(j, root count, midpoint
    sign)`` for ``gamma_j^2 - 4 eta_j^2``, j = k-1, k (exact route).
    ``pieces`` lists ``(lo, hi, depth)`` for the interval route.
    """

    lo: mpq
    hi: mpq
    base_depth: int
    route: str
    low_level_witnesses: tuple = ()
    positivity_witnesses: tuple = ()
    pieces: tuple = ()
    ok: bool = field(default=True, init=False)

    @property
    def width(self) -> mpq:
        return self.hi - self.lo


@dataclass(frozen=True)
class GapFailure:
    """Why no certificate was produced.

    ``reason`` is ``"known-eigenvalue"`` (a root of gamma_level lies in the
    interval) or ``"inconclusive"`` (budget exhausted).
    """

    lo: mpq
    hi: mpq
    reason: str
    level: int | None = None
    ok: bool = field(default=False, init=False)


class GapCertifier:
    """Gap certification over one spectral sequence, caching Sturm sequences."""

    def __init__(self, seq: SpectralSequence | None = None):
        self.seq = seq if seq is not None else SpectralSequence()
        self.signer = GammaSigns(self.seq)
        self._sturm: dict = {}

    # --- exact route --------------------------------------------------------

    def escape_poly(self, k: int) -> IntPoly:
        """gamma_k^2 - 4 eta_k^2, positive exactly where |zeta_k| > 2 (away from poles)."""
        return self.seq.gamma(k).square() - 4 * self.seq.eta(k).square()

    def _sturm_seq(self, key, poly):
        if key not in self._sturm:
            self._sturm[key] = sturm_sequence(poly)
        return self._sturm[key]

    def _open_count(self, key, poly: IntPoly, lo: mpq, hi: mpq) -> int:
        """Distinct roots of ``poly`` in the open interval (lo, hi)."""
        n = sturm_count(poly, lo, hi, self._sturm_seq(key, poly))
        return n - (1 if poly.sign_at(hi) == 0 else 0)

    def certify_exact(self, lo, hi, depth_budget: int):
        lo, hi = mpq(lo), mpq(hi)
        counts = []
        top = min(depth_budget, EXACT_MAX_DEPTH)
        for k in range(1, top + 1):
            n = self._open_count(("gamma", k), self.seq.gamma(k), lo, hi)
            if n:
                return GapFailure(lo, hi, "known-eigenvalue", k)
            counts.append(n)
            if k < MIN_DEPTH:
                continue
            wit = []
            for j in (k - 1, k):
                p = self.escape_poly(j)
                wit.append((j, self._open_count(("escape", j), p, lo, hi), p.sign_at((lo + hi) / 2)))
            if all(c == 0 and s > 0 for _, c, s in wit):
                return GapCertificate(lo, hi, k, "exact", tuple(counts[: k - 2]), tuple(wit))
        return GapFailure(lo, hi, "inconclusive", top)

    # --- interval route -----------------------------------------------------

    def _pieces(self, lo: mpq, hi: mpq, depth_budget: int, min_width: mpq, max_pieces: int, stop_on_fail=False):
        """Bisect [lo, hi] into leaves (lo, hi, status, depth), in order."""
        stack = [(lo, hi)]
        out = []
        budget = max_pieces
        while stack:
            a, b = stack.pop()
            prec = max(160, 2 * max(a.denominator.bit_length(), b.denominator.bit_length()) + 64)
            status, j = escape_depth((a, b), depth_budget, prec)
            budget -= 1
            if status == "escape" or b - a <= min_width or budget <= 0:
                out.append((a, b, status, j))
                if stop_on_fail and status != "escape":
                    break
                continue
            m = (a + b) / 2
            stack.append((m, b))
            stack.append((a, m))
        return out

    def _classify(self, a: mpq, b: mpq, j: int) -> GapFailure:
        """A failed leaf: report a known eigenvalue when gamma_j changes sign on it."""
        for k in range(1, min(j, CLASSIFY_MAX_LEVEL) + 1):
            sa, sb = self.signer.sign(k, a), self.signer.sign(k, b)
            if sa == 0 or sb == 0 or sa != sb:
                return GapFailure(a, b, "known-eigenvalue", k)
        return GapFailure(a, b, "inconclusive", j)

    def certify_interval(self, lo, hi, depth_budget: int, min_width=None, max_pieces: int = 4096):
        lo, hi = mpq(lo), mpq(hi)
        # a sign change of a low-level gamma across the interval is a known eigenvalue
        for k in range(1, min(depth_budget, CLASSIFY_MAX_LEVEL) + 1):
            sa, sb = self.signer.sign(k, lo), self.signer.sign(k, hi)
            if sb == 0 or sa * sb < 0:
                return GapFailure(lo, hi, "known-eigenvalue", k)
        min_width = mpq(min_width) if min_width is not None else (hi - lo) / 2**24
        leaves = self._pieces(lo, hi, depth_budget, min_width, max_pieces, stop_on_fail=True)
        bad = [leaf for leaf in leaves if leaf[2] != "escape"]
        if bad:
            a, b, status, j = bad[0]
            if status == "split":
                return self._classify(a, b, j)
            return GapFailure(lo, hi, "inconclusive", j)
        pieces = tuple((a, b, j) for a, b, _, j in leaves)
        return GapCertificate(lo, hi, max(j for _, _, j in pieces), "interval", pieces=pieces)

    def certified_runs(self, lo, hi, depth_budget: int, min_piece, max_pieces: int = 4096):
        """Maximal runs of certified pieces of [lo, hi] at resolution ``min_piece``."""
        lo, hi = mpq(lo), mpq(hi)
        leaves = self._pieces(lo, hi, depth_budget, mpq(min_piece), max_pieces)
        runs, cur = [], []
        for leaf in leaves:
            if leaf[2] == "escape":
                cur.append(leaf)
            elif cur:
                runs.append(cur)
                cur = []
        if cur:
            runs.append(cur)
        out = []
        for run in runs:
            pieces = tuple((a, b, j) for a, b, _, j in run)
            out.append(
                GapCertificate(run[0][0], run[-1][1], max(j for *_, j in pieces), "interval", pieces=pieces)
            )
        return out

    def certify(self, lo, hi, depth_budget: int = 60, route: str = "auto"):
        """Certificate for (lo, hi) or a :class:`GapFailure`.

        ``route="auto"`` tries the exact route up to :data:`EXACT_MAX_DEPTH`
        and continues with the interval route when that is inconclusive.
        """
        lo, hi = mpq(lo), mpq(hi)
        if not (0 < lo < hi <= SEARCH_HI):
            raise ValueError("need 0 < lo < hi <= 8")
        if route == "exact":
            return self.certify_exact(lo, hi, depth_budget)
        if route == "interval":
            return self.certify_interval(lo, hi, depth_budget)
        if route != "auto":
            raise ValueError(f"unknown route {route!r}")
        res = self.certify_exact(lo, hi, depth_budget)
        if res.ok or res.reason == "known-eigenvalue" or depth_budget <= EXACT_MAX_DEPTH:
            return res
        return self.certify_interval(lo, hi, depth_budget)


def certify_gap(lo, hi, depth_budget: int = 60, route: str = "auto", seq: SpectralSequence | None = None):
    """Certify that (lo, hi) misses the Dirichlet spectrum of every G_m."""
    return GapCertifier(seq).certify(lo, hi, depth_budget, route)


# --- one-sided structure at a root ------------------------------------------------


@dataclass(frozen=True)
class GapSide:
    """Which side of a gamma_k root is a gap, with evidence of accumulation on the other.

    ``gap`` is ``"left"``, ``"right"`` or ``"inconclusive"``.  ``evidence``
    holds ``(level, root interval, distance lower bound, distance upper
    bound)`` for the nearest root of gamma_{k+2j} on the accumulation side.
    """

    k: int
    root: IsolatingInterval
    gap: str
    delta: mpq | None
    certificate: GapCertificate | None
    evidence: tuple = ()

    @property
    def distances_decreasing(self) -> bool:
        """Strict decrease of the evidence distances, certified by disjoint bounds."""
        ev = self.evidence
        return len(ev) >= 2 and all(b[3] < a[2] for a, b in zip(ev, ev[1:]))


def gap_side(
    k: int,
    root: IsolatingInterval,
    iso: SpectrumIsolation,
    halvings: int = 40,
    evidence_steps: int = 4,
    depth_budget: int = EXACT_MAX_DEPTH,
    route: str = "exact",
    certifier: GapCertifier | None = None,
) -> GapSide:
    """Find the gap side of a root of gamma_k by halving delta from 1/4.

    Stops as soon as exactly one of (lo - delta, lo) and (hi, hi + delta)
    certifies, where (lo, hi] is the isolating interval of the root; if both
    ever certify the result is reported as inconclusive.
    """
    cert = certifier if certifier is not None else GapCertifier(iso.seq)
    delta = mpq(1, 4)
    side = "inconclusive"
    found = None
    for _ in range(halvings):
        left = (root.lo - delta, root.lo)
        right = (root.hi, min(root.hi + delta, SEARCH_HI))
        results = []
        for a, b in (left, right):
            if not (0 < a < b):
                results.append(None)
                continue
            if route == "interval":
                r = cert.certify_interval(a, b, depth_budget, max_pieces=512)
            else:
                r = cert.certify(a, b, depth_budget, route)
            results.append(r if r.ok else None)
        ok = [r is not None for r in results]
        if ok == [True, True]:
            side, found = "inconclusive", None
            break
        if any(ok):
            side = "left" if ok[0] else "right"
            found = results[0] if ok[0] else results[1]
            break
        delta /= 2
    evidence = []
    if side != "inconclusive":
        for j in range(1, evidence_steps + 1):
            level = k + 2 * j
            best = None
            for iv in iso.level(level).roots:
                if side == "right" and iv.hi <= root.lo:
                    d = (root.lo - iv.hi, root.hi - iv.lo)
                elif side == "left" and iv.lo >= root.hi:
                    d = (iv.lo - root.hi, iv.hi - root.lo)
                else:
                    continue
                if best is None or d[1] < best[3]:
                    best = (level, iv, d[0], d[1])
            if best is None:
                break
            evidence.append(best)
    return GapSide(k, root, side, delta if found else None, found, tuple(evidence))


# --- enumeration ------------------------------------------------------------------


def gap_enumerate(
    max_level: int = 14,
    min_width=mpq(1, 10**6),
    iso: SpectrumIsolation | None = None,
    depth_budget: int = 60,
    certifier: GapCertifier | None = None,
    resolution: int = 128,
    max_pieces: int = 512,
) -> list[GapCertificate]:
    """Certified gaps of width >= min_width between consecutive roots of gamma_1 .. gamma_max_level.

    Each stretch between neighbouring isolating intervals (and the stretch
    from the last root to 8) is bisected down to pieces of width
    ``max(min_width / 2, stretch / resolution)``; maximal runs of certified
    pieces of width at least ``min_width`` are returned, sorted and disjoint.
    """
    iso = iso if iso is not None else SpectrumIsolation()
    cert = certifier if certifier is not None else GapCertifier(iso.seq)
    min_width = mpq(min_width)
    roots = [iv for iv, _ in iso.all_roots(max_level)]
    stretches = [(a.hi, b.lo) for a, b in zip(roots, roots[1:])]
    stretches.append((roots[-1].hi, SEARCH_HI))
    out = []
    for a, b in stretches:
        if b - a < min_width:
            continue
        piece = max(min_width / 2, (b - a) / resolution)
        for run in cert.certified_runs(a, b, depth_budget, piece, max_pieces):
            if run.width >= min_width:
                out.append(run)
    out.sort(key=lambda c: c.lo)
    return out


def escape_samples(gaps, count: int = 100, steps: int = 30, seed: int = 0, prec: int = 128):
    """Iterate the zeta recursion at random rational points inside certified gaps.

    Returns ``(point, |zeta_1| .. |zeta_steps|)`` per sample, computed with
    mpmath (whose exponent range does not overflow).
    """
    rng = random.Random(seed)
    total = sum(g.width for g in gaps)
    out = []
    for _ in range(count):
        # choose a gap with probability proportional to its width, then a point in it
        t = mpq(rng.randrange(1, 2**53), 2**53) * total
        for g in gaps:
            if t <= g.width:
                break
            t -= g.width
        x = g.lo + t if 0 < t < g.width else (g.lo + g.hi) / 2
        with mpmath.workprec(prec):
            xf = mpmath.mpf(x.numerator) / x.denominator
            z = [xf - 2, xf - 4 - 4 / (xf - 2)]
            z.append(2 + xf * (xf - 4) * (xf**2 - 8 * xf + 8) / (xf**2 - 6 * xf + 4))
            while len(z) < steps:
                z.append(zeta_step(z[-2], z[-1]))
            out.append((x, [abs(v) for v in z]))
    return out


def gaps_to_csv(gaps) -> str:
    """CSV with columns lo_num,lo_den,hi_num,hi_den,base_depth."""
    lines = ["lo_num,lo_den,hi_num,hi_den,base_depth"]
    for g in gaps:
        lines.append(f"{g.lo.numerator},{g.lo.denominator},{g.hi.numerator},{g.hi.denominator},{g.base_depth}")
    return "\n".join(lines) + "\n"
