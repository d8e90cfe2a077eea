"""Certified isolation of the Dirichlet spectrum of G_n, level by level.

Every eigenvalue of the Dirichlet Laplacian of G_n is a root of some
gamma_k, k <= n.  Roots of gamma_k are isolated either by Sturm bisection
(small degree) or by a sign-count certificate: if gamma_k changes sign across
``deg gamma_k`` disjoint intervals, each holds exactly one simple root.  Cut
points for the certificate come from a floating point eigensolve of G_k and
from the roots of lower levels, which new roots can straddle at distances
far below double precision.  The seeds only steer where signs are tested.

Signs at cut points come from :class:`GammaSigns`, which uses interval
arithmetic on the zeta recursion and falls back to exact evaluation.  Every
isolated root is then narrowed to width about 2**-99 by Newton iteration on
the same recursion, with both new endpoints sign-certified.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq, mpz

from .dynamics import certified_gamma_signs, zeta_newton_root
from .exact.poly import IntPoly
from .exact.roots import (
    IsolatingInterval,
    IsolationError,
    cluster_points,
    dyadic_near,
    isolate_roots,
    refine,
    sturm_count,
)
from .graphs import build_g, laplacian, laplacian_sparse
from .recursion import SpectralSequence, multiplicity_S

__all__ = [
    "SEARCH_LO",
    "SEARCH_HI",
    "STURM_MAX_DEGREE",
    "NARROW_BITS",
    "GammaSigns",
    "dirichlet_eigenvalues",
    "isolate_gamma",
    "narrow_root",
    "LevelRoots",
    "SpectrumIsolation",
    "sturm_root_count",
]

# every Dirichlet eigenvalue lies in (0, 8]
SEARCH_LO = mpq(0)
SEARCH_HI = mpq(8)
# Sturm sequences beyond this degree cost minutes and gigabytes
STURM_MAX_DEGREE = 140
# eigenvalues of G_k closer than this are treated as one seed cluster
CLUSTER_TOL = 1e-11
DENSE_MAX = 1500
# isolated roots are narrowed to intervals of width 2**(1 - NARROW_BITS)
NARROW_BITS = 100
_GRID_BITS = 128


def dirichlet_eigenvalues(n: int) -> np.ndarray:
    """All eigenvalues (with multiplicity) of the Dirichlet Laplacian of G_n, ascending.

    Small levels use a dense solver; larger ones reorder the sparse matrix by
    reverse Cuthill-McKee and use a banded solver.
    """
    from scipy.linalg import eig_banded, eigvalsh
    from scipy.sparse.csgraph import reverse_cuthill_mckee

    g = build_g(n)
    size = len(g) - 2
    if size == 0:
        return np.zeros(0)
    if size <= DENSE_MAX:
        return eigvalsh(laplacian(g, "C").matrix.astype(float))
    mat, _ = laplacian_sparse(g, "C")
    perm = reverse_cuthill_mckee(mat.tocsr(), symmetric_mode=True)
    m = mat[perm][:, perm].tocoo()
    low = m.row >= m.col
    bw = int(np.max(m.row[low] - m.col[low]))
    band = np.zeros((bw + 1, size))
    band[(m.row - m.col)[low], m.col[low]] = m.data[low]
    return np.sort(eig_banded(band, lower=True, eigvals_only=True))


class GammaSigns:
    """Certified signs of gamma_k at rational points.

    Interval evaluation of the zeta recursion at a working precision that
    grows with the size of the point's denominator, doubled twice if
    inconclusive; after that the exact polynomial is evaluated.  The
    recursion is verified as an exact identity for every level before it is
    trusted.
    """

    def __init__(self, seq: SpectralSequence):
        self.seq = seq
        self.calls = 0
        self.exact_fallbacks = 0
        self._verified = 0

    def _verify(self, k: int) -> None:
        while self._verified < k:
            j = self._verified + 1
            if not self.seq.zeta_identity(j):
                raise AssertionError(f"zeta recursion fails as an identity at level {j}")
            self._verified = j

    def sign(self, k: int, x) -> int:
        self._verify(k)
        self.calls += 1
        x = mpq(x)
        prec = max(160, 2 * x.denominator.bit_length() + 64)
        for _ in range(3):
            s = certified_gamma_signs(x, k, prec)
            if s is not None:
                return s[-1]
            prec *= 2
        self.exact_fallbacks += 1
        return self.seq.gamma(k).sign_at(x)


def _grid(x, bits: int) -> mpq:
    return mpq(mpz(math.floor(mpq(x) * (mpz(1) << bits))), mpz(1) << bits)


def narrow_root(
    k: int, iv: IsolatingInterval, signer: GammaSigns, bits: int = NARROW_BITS
) -> IsolatingInterval:
    """Shrink an isolating interval of gamma_k to width about 2**(1 - bits).

    The Newton estimate is only a guess: the result is accepted when both new
    endpoints lie in the old interval and carry opposite certified signs, and
    exact bisection is used otherwise.
    """
    half = mpq(1, mpz(1) << bits)
    if iv.width <= 2 * half:
        return iv
    try:
        r = _grid(zeta_newton_root(k, iv.lo, iv.hi, prec=2 * bits + 64, iters=40 + bits), bits + 28)
    except (ArithmeticError, ValueError):
        r = None
    if r is not None:
        a, b = r - half, r + half
        if iv.lo <= a and b <= iv.hi:
            sa = iv.sign_lo if a == iv.lo else signer.sign(k, a)
            sb = iv.sign_hi if b == iv.hi else signer.sign(k, b)
            if sa and sb and sa != sb:
                return IsolatingInterval(iv.poly, a, b, sa, sb, iv.method)
    return refine(iv, 2 * half)


def isolate_gamma(k: int, seq: SpectralSequence, method: str = "auto") -> list[IsolatingInterval]:
    """Narrow isolating intervals for every root of gamma_k in (0, 8].

    ``method`` is ``"sturm"``, ``"sign-count"`` or ``"auto"`` (Sturm up to
    :data:`STURM_MAX_DEGREE`).  Sign-count isolation needs the roots of the
    lower levels, which are isolated along the way.
    """
    return list(SpectrumIsolation(seq).level(k, method).roots)


def _windows(eig: np.ndarray):
    """Seed windows (cluster index, lo, hi, eigenvalue count) around eigenvalue clusters."""
    clusters = cluster_points(eig, CLUSTER_TOL)
    m = len(clusters)
    sizes = np.diff(np.searchsorted(eig, [c[0] for c in clusters] + [np.inf], side="left"))
    out = []
    for i, (a, b) in enumerate(clusters):
        left = a - clusters[i - 1][1] if i else a - float(SEARCH_LO)
        right = clusters[i + 1][0] - b if i + 1 < m else float(SEARCH_HI) - b
        eps = min(1e-10, 0.25 * left, 0.25 * right)
        x, y = dyadic_near(a - eps), dyadic_near(b + eps)
        if eps > 0 and SEARCH_LO < x < y <= SEARCH_HI:
            out.append((x, y, int(sizes[i])))
    return out


@dataclass(frozen=True)
class LevelRoots:
    """Isolated roots of gamma_k."""

    k: int
    poly: IntPoly
    roots: tuple[IsolatingInterval, ...]

    @property
    def method(self) -> str:
        return self.roots[0].method if self.roots else "sturm"


class SpectrumIsolation:
    """Memoised narrow isolating intervals for gamma_1, gamma_2, ... over one sequence.

    Roots of lower levels serve as cut points for higher ones.  Where new
    roots straddle old ones more closely than the current width, the old
    intervals are narrowed further (doubling the bit depth each round), so
    stored intervals may shrink over the lifetime of the object.
    """

    # deepest narrowing attempted before giving up on a window
    MAX_BITS = 6400

    def __init__(self, seq: SpectralSequence | None = None):
        self.seq = seq if seq is not None else SpectralSequence()
        self.signer = GammaSigns(self.seq)
        self._roots: dict[int, list[IsolatingInterval]] = {}
        self._depth: dict[int, list[int]] = {}
        self.methods: dict[int, str] = {}

    def level(self, k: int, method: str = "auto") -> LevelRoots:
        if k < 1:
            raise ValueError("levels start at 1")
        if k not in self._roots:
            for j in range(1, k):
                self.level(j)
            p = self.seq.gamma(k)
            if method == "auto":
                method = "sturm" if p.degree <= STURM_MAX_DEGREE else "sign-count"
            if method == "sturm":
                ivs = isolate_roots(p, SEARCH_LO, SEARCH_HI)
                bits = [NARROW_BITS] * len(ivs)
            elif method == "sign-count":
                ivs, bits = self._sign_count(k, p)
            else:
                raise ValueError(f"unknown method {method!r}")
            self._roots[k] = [narrow_root(k, iv, self.signer, b) for iv, b in zip(ivs, bits)]
            self._depth[k] = list(bits)
            self.methods[k] = method
        return LevelRoots(k, self.seq.gamma(k), tuple(self._roots[k]))

    def _deepen(self, j: int, i: int, bits: int) -> None:
        if self._depth[j][i] < bits:
            self._roots[j][i] = narrow_root(j, self._roots[j][i], self.signer, bits)
            self._depth[j][i] = bits

    def _sign_count(self, k: int, p: IntPoly):
        d = p.degree
        windows = _windows(dirichlet_eigenvalues(k))
        old = sorted(
            ((iv.lo, j, i) for j in range(1, k) for i, iv in enumerate(self._roots[j])),
            key=lambda t: t[0],
        )
        los = [t[0] for t in old]
        members = []
        for x, y, size in windows:
            lo_i, hi_i = bisect.bisect_right(los, x), bisect.bisect_left(los, y)
            inside = [(j, i) for _, j, i in old[lo_i:hi_i]]
            members.append(inside)
        signs: dict = {}

        def sign(x):
            if x not in signs:
                signs[x] = self.signer.sign(k, x)
            return signs[x]

        def bracket(extra=()):
            cuts = set(extra)
            for (x, y, _), inside in zip(windows, members):
                cuts.update((x, y))
                for j, i in inside:
                    iv = self._roots[j][i]
                    if x < iv.lo and iv.hi < y:
                        cuts.update((iv.lo, iv.hi))
            pts = [c for c in sorted(cuts) if sign(c)]
            return [
                IsolatingInterval(p, a, b, sign(a), sign(b), "sign-count")
                for a, b in zip(pts, pts[1:])
                if sign(a) != sign(b)
            ]

        def deficient(found):
            lo_ends = [iv.lo for iv in found]
            out = []
            for w, ((x, y, size), inside) in enumerate(zip(windows, members)):
                got = bisect.bisect_left(lo_ends, y) - bisect.bisect_left(lo_ends, x)
                expected = size - sum(multiplicity_S(k - j) for j, _ in inside)
                if got < expected and inside:
                    out.append(w)
            return out

        depth = [NARROW_BITS] * len(windows)
        found = bracket()
        bits = NARROW_BITS
        while len(found) != d and bits < self.MAX_BITS:
            bad = deficient(found)
            if not bad:
                break
            bits *= 2
            for w in bad:
                depth[w] = bits
                for j, i in members[w]:
                    self._deepen(j, i, bits)
            found = bracket()
        if len(found) != d:
            # uniform grid inside every multi-eigenvalue window
            grid = [
                x + (y - x) * t / 64 for x, y, size in windows if size > 1 for t in range(1, 64)
            ]
            found = bracket(grid)
        if len(found) != d:
            raise IsolationError(f"found {len(found)} sign changes for degree {d}")
        # new roots inherit the depth of the window they were found in
        out_bits = []
        for iv in found:
            b = NARROW_BITS
            for w, (x, y, _) in enumerate(windows):
                if depth[w] > b and x <= iv.lo and iv.hi <= y:
                    b = depth[w]
            out_bits.append(b)
        return found, out_bits

    def separate(self, max_level: int) -> None:
        """Narrow roots of levels <= max_level until all their intervals are disjoint.

        Distinct gamma_k are coprime, so doubling the depth of both members of
        every overlapping pair terminates.
        """
        for k in range(1, max_level + 1):
            self.level(k)
        while True:
            entries = sorted(
                ((iv.lo, iv.hi, j, i) for j in range(1, max_level + 1) for i, iv in enumerate(self._roots[j])),
                key=lambda t: t[0],
            )
            clash = {
                (e[2], e[3])
                for a, b in zip(entries, entries[1:])
                if not a[1] <= b[0]
                for e in (a, b)
            }
            if not clash:
                return
            for j, i in clash:
                if self._depth[j][i] >= self.MAX_BITS:
                    raise IsolationError(f"cannot separate a root of gamma_{j} from its neighbours")
                self._deepen(j, i, 2 * self._depth[j][i])

    def dirichlet_spectrum(self, n: int) -> list[tuple[IsolatingInterval, int, int]]:
        """Distinct eigenvalues of the Dirichlet Laplacian of G_n as (interval, level, multiplicity).

        Intervals are pairwise disjoint.
        """
        self.separate(n)
        out = []
        for k in range(1, n + 1):
            mult = 1 if k == n else multiplicity_S(n - k)
            if mult:
                out.extend((iv, k, mult) for iv in self._roots[k])
        out.sort(key=lambda t: t[0].lo)
        return out

    def refined(self, k: int, width) -> list[IsolatingInterval]:
        return [refine(iv, width) for iv in self.level(k).roots]

    def all_roots(self, max_level: int) -> list[tuple[IsolatingInterval, int]]:
        """Every root of gamma_1 .. gamma_max_level with its level, in disjoint intervals."""
        self.separate(max_level)
        out = [(iv, k) for k in range(1, max_level + 1) for iv in self._roots[k]]
        out.sort(key=lambda t: t[0].lo)
        return out


def sturm_root_count(p: IntPoly) -> int:
    """Number of distinct roots of ``p`` in (0, 8] by a Sturm sequence."""
    return sturm_count(p, SEARCH_LO, SEARCH_HI)
