"""Fast evaluation of the zeta dynamics, rigorous and approximate.

``zeta_1 = x - 2``, ``zeta_2 = gamma_2 / gamma_1``, ``zeta_3 = gamma_3 / gamma_2``
and ``zeta_n = 2 + (1 + 2/zeta_{n-1})(zeta_{n-2}^2 - 4)`` for n >= 4.  Because
``zeta_n = gamma_n / eta_n`` and the sign of ``eta_n`` is the product of the
signs of ``gamma_{n-1}`` and ``gamma_{n-3}`` (every other factor of ``eta_n``
appears to an even power), k steps of the recursion give the signs of
``gamma_1 .. gamma_k`` at a point.

Rigour comes from interval arithmetic on MPFR numbers: each operation is
rounded to nearest and then widened by one ulp on each side, which encloses
the exact result.  A point evaluation is conclusive when no enclosure of
``zeta_1 .. zeta_k`` contains 0; then none of the gamma_j or eta_j vanish
there and the recursion values are the values of the rational functions.
That last step relies on the recursion holding as an identity of rational
functions, which :meth:`basilica.recursion.SpectralSequence.zeta_identity`
verifies exactly for each level used.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpfr, mpq

__all__ = [
    "Interval",
    "IntervalError",
    "zeta_enclosures",
    "escape_depth",
    "certified_gamma_signs",
    "zeta_values",
    "zeta_newton_root",
]

_next_up = gmpy2.next_above
_next_down = gmpy2.next_below


class IntervalError(ArithmeticError):
    """An operation would divide by an interval containing zero."""


class Interval:
    """Closed interval [lo, hi] with MPFR endpoints and outward rounding."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = lo
        self.hi = lo if hi is None else hi

    @classmethod
    def from_rational(cls, q) -> Interval:
        q = mpq(q)
        x = mpfr(q)
        if mpq(x) == q:
            return cls(x, x)
        return cls(_next_down(x), _next_up(x))

    @classmethod
    def hull(cls, a, b) -> Interval:
        lo, hi = cls.from_rational(a), cls.from_rational(b)
        return cls(lo.lo, hi.hi)

    def __repr__(self) -> str:
        return f"Interval({float(self.lo):.17g}, {float(self.hi):.17g})"

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def sign(self) -> int:
        """+1 or -1 when the interval excludes 0, else 0 (undetermined)."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def mag_lower(self):
        """Lower bound on |x| over the interval."""
        if self.lo > 0:
            return self.lo
        if self.hi < 0:
            return -self.hi
        return mpfr(0)

    def __add__(self, o):
        if not isinstance(o, Interval):
            o = _const(o)
        return Interval(_next_down(self.lo + o.lo), _next_up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        if not isinstance(o, Interval):
            o = _const(o)
        return Interval(_next_down(self.lo - o.hi), _next_up(self.hi - o.lo))

    def __rsub__(self, o):
        return _const(o) - self

    def __mul__(self, o):
        if not isinstance(o, Interval):
            o = _const(o)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_next_down(min(p)), _next_up(max(p)))

    __rmul__ = __mul__

    def square(self):
        a, b = self.lo, self.hi
        if a >= 0:
            return Interval(_next_down(a * a), _next_up(b * b))
        if b <= 0:
            return Interval(_next_down(b * b), _next_up(a * a))
        return Interval(mpfr(0), _next_up(max(a * a, b * b)))

    def reciprocal(self):
        if self.contains_zero():
            raise IntervalError("division by an interval containing zero")
        return Interval(_next_down(1 / self.hi), _next_up(1 / self.lo))

    def __truediv__(self, o):
        if not isinstance(o, Interval):
            o = _const(o)
        return self * o.reciprocal()

    def __rtruediv__(self, o):
        return _const(o) * self.reciprocal()


def _const(c) -> Interval:
    if isinstance(c, int):
        x = mpfr(c)
        if x == c:
            return Interval(x, x)
    return Interval.from_rational(c)


# --- the first three levels in forms that avoid dependency blow-up ----------------


def _zeta_123(x: Interval) -> list:
    """Enclosures of zeta_1, zeta_2, zeta_3 over ``x``.

    ``zeta_2 = x - 4 - 4/(x - 2)`` is increasing on each side of 2, so its range
    over an interval avoiding 2 is spanned by the endpoint values.
    ``zeta_3 = 2 + x(x-4)(x^2-8x+8) / (x^2-6x+4)``.
    """
    z1 = x - 2
    if z1.contains_zero():
        raise IntervalError("zeta_1 vanishes")
    if x.lo == x.hi:
        z2 = x - 4 - 4 / z1
    else:
        lo = Interval(x.lo)
        hi = Interval(x.hi)
        a = lo - 4 - 4 / (lo - 2)
        b = hi - 4 - 4 / (hi - 2)
        z2 = Interval(a.lo, b.hi)
    g2 = x.square() - 6 * x + 4
    if g2.contains_zero():
        raise IntervalError("gamma_2 vanishes")
    quartic = x * (x - 4) * (x.square() - 8 * x + 8)
    z3 = 2 + quartic / g2
    return [z1, z2, z3]


def zeta_enclosures(x, k: int, prec: int = 160) -> list:
    """Enclosures of zeta_1 .. zeta_k over the rational point or interval ``x``.

    ``x`` is a rational, an ``(lo, hi)`` pair of rationals or an
    :class:`Interval`.  Raises :class:`IntervalError` as soon as an enclosure
    needed as a divisor contains 0.
    """
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        if isinstance(x, Interval):
            X = x
        elif isinstance(x, tuple):
            X = Interval.hull(*x)
        else:
            X = Interval.from_rational(x)
        z = _zeta_123(X)
        while len(z) < k:
            z1, z2 = z[-1], z[-2]
            z.append(2 + (1 + 2 / z1) * (z2.square() - 4))
        return z[:k]


def escape_depth(x, budget: int, prec: int = 160) -> tuple[str, int]:
    """Test the escape criterion uniformly over the interval ``x``.

    Returns ``("escape", k)`` when enclosures of zeta_1 .. zeta_k all exclude
    0 and ``|zeta_{k-1}|, |zeta_k| > 2`` (k >= 3) throughout, so that no
    gamma_m, m >= 1, vanishes on ``x``.  Returns ``("split", j)`` when the
    enclosure of zeta_j meets 0 (or loses all precision), and
    ``("budget", budget)`` when depth ``budget`` is reached undecided.
    """
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        X = x if isinstance(x, Interval) else Interval.hull(*x)
        try:
            z = _zeta_123(X)
        except IntervalError as exc:
            return "split", 1 if "zeta_1" in str(exc) else 2
        for j, e in enumerate(z, start=1):
            if e.contains_zero():
                return "split", j
        z = z[1:]
        j = 3
        while True:
            if z[-2].mag_lower() > 2 and z[-1].mag_lower() > 2:
                return "escape", j
            if j >= budget:
                return "budget", budget
            a, b = z[-1], z[-2]
            nxt = 2 + (1 + 2 / a) * (b.square() - 4)
            j += 1
            if not (gmpy2.is_finite(nxt.lo) and gmpy2.is_finite(nxt.hi)) or nxt.contains_zero():
                return "split", j
            z = [a, nxt]


def certified_gamma_signs(x, k: int, prec: int = 160) -> list | None:
    """Certified signs of gamma_1 .. gamma_k at a rational point, or None.

    None means the enclosures were not sharp enough (or x is a root of some
    gamma_j, j <= k); callers then fall back to exact evaluation.
    """
    try:
        z = zeta_enclosures(x, k, prec)
    except IntervalError:
        return None
    zs = []
    for e in z:
        s = e.sign()
        if s == 0:
            return None
        zs.append(s)
    return _gamma_signs_from_zeta(zs)


def _gamma_signs_from_zeta(zs: list) -> list:
    g = [1]  # gamma_0 = 1
    for n, s in enumerate(zs, start=1):
        if n == 1:
            eta = 1
        elif n <= 3:
            eta = g[n - 1]
        else:
            eta = g[n - 1] * g[n - 3]
        g.append(s * eta)
    return g[1:]


# --- approximate evaluation and Newton refinement ---------------------------------


def zeta_values(x, k: int, prec: int = 200) -> tuple[list, list]:
    """Approximate (zeta_n, d zeta_n / dx) for n = 1..k at a point (no rigour)."""
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        x = mpfr(mpq(x)) if not isinstance(x, type(mpfr(0))) else x
        z1, d1 = x - 2, mpfr(1)
        z2 = x - 4 - 4 / z1
        d2 = 1 + 4 / (z1 * z1)
        g2, dg2 = x * x - 6 * x + 4, 2 * x - 6
        q = x * (x - 4) * (x * x - 8 * x + 8)
        dq = 4 * x**3 - 36 * x**2 + 80 * x - 32
        z3 = 2 + q / g2
        d3 = (dq * g2 - q * dg2) / (g2 * g2)
        zs, ds = [z1, z2, z3], [d1, d2, d3]
        while len(zs) < k:
            a, da = zs[-1], ds[-1]
            b, db = zs[-2], ds[-2]
            f = 1 + 2 / a
            h = b * b - 4
            zs.append(2 + f * h)
            ds.append(-2 * da / (a * a) * h + f * 2 * b * db)
        return zs[:k], ds[:k]


def zeta_newton_root(k: int, lo, hi, prec: int = 200, iters: int = 60):
    """Approximate root of zeta_k in the rational bracket (lo, hi).

    Safeguarded Newton: steps leaving the current bracket are replaced by
    bisection, using approximate signs of gamma_k.  Returns an ``mpfr``.
    """
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        a, b = mpfr(mpq(lo)), mpfr(mpq(hi))
        sa = _approx_gamma_sign(a, k, prec)
        x = (a + b) / 2
        tol = mpfr(2) ** (-prec + 8) * max(abs(a), 1)
        for _ in range(iters):
            try:
                zs, ds = zeta_values(x, k, prec)
            except ZeroDivisionError:
                x = (a + b) / 2
                continue
            s = _approx_gamma_sign_from(zs)
            if s == 0:
                x = (a + b) / 2 if x != (a + b) / 2 else a + (b - a) / 3
                continue
            if s == sa:
                a = x
            else:
                b = x
            z, d = zs[-1], ds[-1]
            if d != 0 and gmpy2.is_finite(d):
                step = z / d
                if abs(step) <= tol:
                    return x - step
                nx = x - step
            else:
                nx = None
            if nx is None or not (a < nx < b):
                nx = (a + b) / 2
            if b - a <= tol:
                return nx
            x = nx
        return x


def _approx_gamma_sign(x, k, prec) -> int:
    zs, _ = zeta_values(x, k, prec)
    return _approx_gamma_sign_from(zs)


def _approx_gamma_sign_from(zs) -> int:
    out = []
    for z in zs:
        if z == 0 or not gmpy2.is_finite(z):
            return 0
        out.append(1 if z > 0 else -1)
    return _gamma_signs_from_zeta(out)[-1]
