"""Quotients of integer polynomials and their pointwise evaluation.

A point where the denominator vanishes evaluates to :data:`POLE` rather than
raising, because pole values are legitimate inputs to the dynamics built on
these functions.  A point where a computation would need 0/0 evaluates to
:data:`INDETERMINATE`.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpq

from .modular import coprime
from .poly import ONE, IntPoly, as_mpq

__all__ = ["RationalFunction", "POLE", "INDETERMINATE", "rf_eval", "is_pole"]


class _Special:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return self.name


POLE = _Special("POLE")
INDETERMINATE = _Special("INDETERMINATE")


def is_pole(x) -> bool:
    return x is POLE


class RationalFunction:
    """Reduced quotient ``num / den`` with ``lc(den) > 0``.

    ``assume_coprime=True`` skips the gcd and only verifies coprimality with a
    modular certificate, which is what large-degree callers want.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: IntPoly, den: IntPoly = ONE, assume_coprime: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = num, ONE
        elif assume_coprime:
            if not coprime(num, den):
                raise ValueError("numerator and denominator share a factor")
        elif den.degree > 0 and not coprime(num, den):
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        # remove a common integer content too
        c = gmpy2.gcd(num.content(), den.content())
        if c > 1:
            num = IntPoly._raw([x // c for x in num.coeffs])
            den = IntPoly._raw([x // c for x in den.coeffs])
        if den.lc < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def _trusted(cls, num: IntPoly, den: IntPoly) -> RationalFunction:
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def of(cls, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, IntPoly):
            return cls._trusted(x, ONE)
        q = as_mpq(x)
        return cls(IntPoly([q.numerator]), IntPoly([q.denominator]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.of(other)
            except TypeError:
                return NotImplemented
        # cross multiplication does not rely on both sides being reduced
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        o = RationalFunction.of(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._trusted(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.of(other))

    def __rsub__(self, other):
        return RationalFunction.of(other) - self

    def __mul__(self, other):
        o = RationalFunction.of(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def reciprocal(self):
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * RationalFunction.of(other).reciprocal()

    def __rtruediv__(self, other):
        return RationalFunction.of(other) * self.reciprocal()

    def __call__(self, x):
        return rf_eval(self, x)


def rf_eval(f: RationalFunction, x):
    """Exact value of a reduced rational function at a rational point, or POLE."""
    x = as_mpq(x)
    d, _ = f.den.eval_homogeneous(x.numerator, x.denominator)
    if d == 0:
        return POLE
    n, _ = f.num.eval_homogeneous(x.numerator, x.denominator)
    shift = f.den.degree - f.num.degree
    # num(x)/den(x) = (q^dn num~) / (q^dd den~) with q the denominator of x
    q = x.denominator
    if shift >= 0:
        return mpq(n * q**shift, d)
    return mpq(n, d * q ** (-shift))
