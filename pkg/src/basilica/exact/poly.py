"""Dense univariate polynomials with integer coefficients.

Coefficients are stored low degree first as ``gmpy2.mpz`` values.  Products of
large operands go through Kronecker substitution: both factors are packed into
one big integer, multiplied with GMP (which switches to FFT multiplication for
large sizes), and unpacked again.  Exact division uses the same packing
together with a Mignotte bound on the quotient coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq, mpz

__all__ = [
    "IntPoly",
    "NotDivisibleError",
    "LAMBDA",
    "ONE",
    "ZERO",
    "as_mpq",
]

# Below this many coefficients in the shorter factor a plain double loop wins.
_SCHOOLBOOK_CUTOFF = 24
# Horner is used below this many coefficients when evaluating homogeneously.
_SPLIT_EVAL_CUTOFF = 48
_ZERO = mpz(0)


class NotDivisibleError(ArithmeticError):
    """Raised by :meth:`IntPoly.exact_div` when the divisor does not divide.

    ``remainder_degree`` is the degree of the remainder over the rationals.
    """

    def __init__(self, remainder_degree: int):
        super().__init__(f"not divisible, remainder has degree {remainder_degree}")
        self.remainder_degree = remainder_degree


def as_mpq(x) -> mpq:
    """Convert int, Fraction, mpz or mpq to ``mpq`` without going through floats."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _trim(c: list) -> tuple:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


# --- Kronecker packing --------------------------------------------------------


def _offset_bytes(nslots: int, width: int) -> mpz:
    # integer whose every slot holds 2**(8*width - 1)
    return mpz.from_bytes((b"\x00" * (width - 1) + b"\x80") * nslots, "little")


def _pack(coeffs: Sequence, width: int) -> mpz:
    half = mpz(1) << (8 * width - 1)
    data = b"".join((c + half).to_bytes(width, "little") for c in coeffs)
    return mpz.from_bytes(data, "little") - _offset_bytes(len(coeffs), width)


def _unpack(value: mpz, nslots: int, width: int) -> list | None:
    """Balanced base-2**(8*width) digits of ``value``, or None if out of range."""
    shifted = value + _offset_bytes(nslots, width)
    if shifted < 0 or shifted.bit_length() > 8 * width * nslots:
        return None
    data = shifted.to_bytes(nslots * width, "little")
    half = mpz(1) << (8 * width - 1)
    from_bytes = mpz.from_bytes
    return [from_bytes(data[i : i + width], "little") - half for i in range(0, nslots * width, width)]


def _maxbits(coeffs: Sequence) -> int:
    return max(abs(c).bit_length() for c in coeffs)


def _schoolbook(a: Sequence, b: Sequence) -> list:
    if len(a) > len(b):
        a, b = b, a
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _mul_coeffs(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        return _schoolbook(a, b)
    nbits = _maxbits(a) + _maxbits(b) + min(len(a), len(b)).bit_length() + 2
    width = (nbits + 7) // 8
    if a is b:
        pa = _pack(a, width)
        prod = pa * pa
    else:
        prod = _pack(a, width) * _pack(b, width)
    out = _unpack(prod, len(a) + len(b) - 1, width)
    assert out is not None
    return out


def _power(base: mpz, k: int, cache: dict) -> mpz:
    v = cache.get(k)
    if v is None:
        if k == 0:
            v = mpz(1)
        elif k == 1:
            v = base
        else:
            h = _power(base, k // 2, cache)
            v = h * h if k % 2 == 0 else h * h * base
        cache[k] = v
    return v


def _eval_split(c: Sequence, lo: int, hi: int, num: mpz, den: mpz, npow: dict, dpow: dict) -> mpz:
    """sum_{i=lo..hi} c_i num^(i-lo) den^(hi-i) by binary splitting."""
    if hi - lo < _SPLIT_EVAL_CUTOFF:
        acc = c[hi]
        dp = mpz(1)
        for k in range(hi - 1, lo - 1, -1):
            dp *= den
            acc = acc * num + c[k] * dp
        return acc
    mid = (lo + hi + 1) // 2
    left = _eval_split(c, lo, mid - 1, num, den, npow, dpow)
    right = _eval_split(c, mid, hi, num, den, npow, dpow)
    return left * _power(den, hi - mid + 1, dpow) + right * _power(num, mid - lo, npow)


# --- the polynomial type -------------------------------------------------------


class IntPoly:
    """Immutable polynomial in one variable over the integers.

    Examples
    --------
    >>> p = IntPoly([0, -2, 1])        # x**2 - 2x
    >>> p.degree, p(3)
    (2, mpq(3,1))
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = []
        for x in coeffs:
            if isinstance(x, (float, Fraction)) or (isinstance(x, type(mpq())) and x.denominator != 1):
                raise TypeError("IntPoly coefficients must be integers")
            c.append(mpz(x))
        self._c = _trim(c)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs) -> IntPoly:
        # trusted constructor, coefficients already mpz
        obj = cls.__new__(cls)
        obj._c = _trim(list(coeffs))
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> IntPoly:
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> IntPoly:
        return cls._raw([_ZERO] * degree + [mpz(c)])

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> IntPoly:
        out = ONE
        for r in roots:
            out = out * cls([-r, 1])
        return out

    # basic accessors

    @property
    def coeffs(self) -> tuple:
        """Coefficients, constant term first."""
        return self._c

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self._c) - 1

    @property
    def lc(self) -> mpz:
        return self._c[-1] if self._c else _ZERO

    def is_zero(self) -> bool:
        return not self._c

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, i: int) -> mpz:
        return self._c[i] if 0 <= i < len(self._c) else _ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self._c == other._c
        if isinstance(other, int) or type(other) is type(_ZERO):
            return self._c == _trim([mpz(other)])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    def __repr__(self) -> str:
        if self.degree > 8:
            return f"IntPoly(<degree {self.degree}>)"
        return f"IntPoly({[int(c) for c in self._c]})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    # arithmetic

    @staticmethod
    def _coerce(other) -> IntPoly | None:
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int) or type(other) is type(_ZERO):
            return IntPoly._raw([mpz(other)])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return IntPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> IntPoly:
        return IntPoly._raw([-c for c in self._c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int) or type(other) is type(_ZERO):
            k = mpz(other)
            return IntPoly._raw([c * k for c in self._c])
        if not isinstance(other, IntPoly):
            return NotImplemented
        return IntPoly._raw(_mul_coeffs(self._c, other._c))

    __rmul__ = __mul__

    def square(self) -> IntPoly:
        return IntPoly._raw(_mul_coeffs(self._c, self._c))

    def __pow__(self, e: int) -> IntPoly:
        if e < 0:
            raise ValueError("negative exponent")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def scale_shift(self, k: int) -> IntPoly:
        """Multiply by x**k."""
        if not self._c:
            return self
        return IntPoly._raw([_ZERO] * k + list(self._c))

    # division

    def exact_div(self, divisor: IntPoly) -> IntPoly:
        """Quotient ``self / divisor``; raises :class:`NotDivisibleError` otherwise."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return ZERO
        if self.degree < divisor.degree:
            raise NotDivisibleError(self.degree)
        if divisor.degree <= _SCHOOLBOOK_CUTOFF or self.degree - divisor.degree <= _SCHOOLBOOK_CUTOFF:
            return self._long_div(divisor)
        q = self._kronecker_div(divisor)
        if q is None:
            raise NotDivisibleError(self.rational_rem(divisor).degree)
        return q

    def _long_div(self, divisor: IntPoly) -> IntPoly:
        rem = list(self._c)
        db = divisor.degree
        lcb = divisor.lc
        bc = divisor._c
        nq = len(rem) - db
        q = [_ZERO] * nq
        for k in range(nq - 1, -1, -1):
            top = rem[k + db]
            if top:
                qk, r = gmpy2.f_divmod(top, lcb)
                if r:
                    raise NotDivisibleError(self.rational_rem(divisor).degree)
                q[k] = qk
                for j in range(db + 1):
                    rem[k + j] -= qk * bc[j]
        if any(rem[:db]):
            raise NotDivisibleError(self.rational_rem(divisor).degree)
        return IntPoly._raw(q)

    def _kronecker_div(self, divisor: IntPoly) -> IntPoly | None:
        a, b = self._c, divisor._c
        m = len(a) - len(b)  # quotient degree
        # Mignotte: every factor of ``a`` of degree m has coefficients below
        # 2**m * ||a||_2.
        norm2 = gmpy2.isqrt(sum(c * c for c in a)) + 1
        qbound_bits = m + norm2.bit_length()
        nbits = qbound_bits + _maxbits(b) + len(b).bit_length() + 3
        width = (nbits + 7) // 8
        av = _pack(a, width)
        bv = _pack(b, width)
        qv, r = gmpy2.f_divmod(av, bv)
        if r:
            return None
        q = _unpack(qv, m + 1, width)
        if q is None or _maxbits(q) > qbound_bits:
            return None
        # with this slot width both sides of a == b*q are represented
        # uniquely, so the integer identity implies the polynomial one
        return IntPoly._raw(q)

    def pseudo_divmod(self, divisor: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Return (q, r) with lc(d)**(deg a - deg d + 1) * a == q*d + r."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        db = divisor.degree
        if self.degree < db:
            return ZERO, self
        rem = list(self._c)
        bc = divisor._c
        lcb = divisor.lc
        delta = self.degree - db
        q = [_ZERO] * (delta + 1)
        for k in range(delta, -1, -1):
            top = rem[k + db]
            # scale what is left by lc(b), then cancel the top coefficient
            for i in range(k + db):
                rem[i] *= lcb
            for i in range(len(q)):
                q[i] *= lcb
            q[k] += top
            for j in range(db):
                rem[k + j] -= top * bc[j]
            rem[k + db] = _ZERO
        return IntPoly._raw(q), IntPoly._raw(rem[:db])

    def pseudo_rem(self, divisor: IntPoly) -> IntPoly:
        """Pseudo-remainder, computed without building the quotient."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        db = divisor.degree
        rem = list(self._c)
        if len(rem) - 1 < db:
            return self
        bc = divisor._c
        lcb = divisor.lc
        for top_idx in range(len(rem) - 1, db - 1, -1):
            top = rem[top_idx]
            base = top_idx - db
            if top:
                for i in range(top_idx):
                    rem[i] *= lcb
                for j in range(db):
                    rem[base + j] -= top * bc[j]
            else:
                for i in range(top_idx):
                    rem[i] *= lcb
            rem[top_idx] = _ZERO
        return IntPoly._raw(rem[:db])

    def rational_rem(self, divisor: IntPoly) -> IntPoly:
        """Remainder over Q, scaled to a primitive integer polynomial."""
        return self.pseudo_rem(divisor).primitive()

    # structure

    def content(self) -> mpz:
        g = _ZERO
        for c in self._c:
            g = gmpy2.gcd(g, c)
            if g == 1:
                break
        return g

    def primitive(self) -> IntPoly:
        """Divide by the content and make the leading coefficient positive."""
        if not self._c:
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        if g == 1:
            return self
        return IntPoly._raw([c // g for c in self._c])

    def derivative(self) -> IntPoly:
        return IntPoly._raw([c * k for k, c in enumerate(self._c)][1:])

    def gcd(self, other: IntPoly) -> IntPoly:
        """Greatest common divisor, primitive with positive leading coefficient.

        Uses the primitive remainder sequence, so it is meant for moderate
        degrees; :func:`basilica.exact.modular.coprime` is the fast test for
        the common question "is the gcd trivial?".
        """
        a, b = self.primitive(), other.primitive()
        if a.is_zero():
            return b
        if b.is_zero():
            return a
        ca, cb = self.content(), other.content()
        cont = gmpy2.gcd(ca, cb)
        if a.degree < b.degree:
            a, b = b, a
        while not b.is_zero():
            r = a.pseudo_rem(b)
            a, b = b, r.primitive()
        return a.primitive() * cont

    def squarefree_part(self) -> IntPoly:
        """Product of the distinct irreducible factors, primitive."""
        if self.degree <= 0:
            return self.primitive() if self._c else self
        g = self.gcd(self.derivative())
        if g.degree == 0:
            return self.primitive()
        return self.primitive().exact_div(g.primitive())

    # evaluation

    def __call__(self, x):
        """Exact value at an integer or rational point (returned as ``mpq``)."""
        x = as_mpq(x)
        num, den = self.eval_homogeneous(x.numerator, x.denominator)
        return mpq(num, den ** max(self.degree, 0)) if self._c else mpq(0)

    def eval_homogeneous(self, num, den) -> tuple[mpz, mpz]:
        """Return ``(den**deg * p(num/den), den)`` as integers; ``den > 0``."""
        num, den = mpz(num), mpz(den)
        c = self._c
        if not c:
            return _ZERO, den
        if len(c) > _SPLIT_EVAL_CUTOFF:
            return _eval_split(c, 0, len(c) - 1, num, den, {}, {}), den
        acc = c[-1]
        dpow = mpz(1)
        for k in range(len(c) - 2, -1, -1):
            dpow *= den
            acc = acc * num + c[k] * dpow
        return acc, den

    def sign_at(self, x) -> int:
        """Sign (-1, 0, 1) of the value at a rational point."""
        x = as_mpq(x)
        v, _ = self.eval_homogeneous(x.numerator, x.denominator)
        return (v > 0) - (v < 0)

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self._c):
            acc = acc * x + float(c)
        return acc

    def compose_linear(self, a, b) -> IntPoly:
        """Return p(a*x + b) for integers a, b (Taylor shift then scale)."""
        a, b = mpz(a), mpz(b)
        c = list(self._c)
        n = len(c)
        # Horner-style Taylor shift by b
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += b * c[j + 1]
        apow = mpz(1)
        for k in range(n):
            c[k] *= apow
            apow *= a
        return IntPoly._raw(c)


ZERO = IntPoly._raw([])
ONE = IntPoly._raw([mpz(1)])
LAMBDA = IntPoly._raw([_ZERO, mpz(1)])
