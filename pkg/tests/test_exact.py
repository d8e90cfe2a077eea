from fractions import Fraction

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from basilica.exact.charpoly import charpoly, charpoly_bareiss, charpoly_crt
from basilica.exact.modular import coprime, is_squarefree
from basilica.exact.poly import IntPoly, NotDivisibleError
from basilica.exact.rational import RationalFunction, is_pole, rf_eval
from basilica.exact.roots import isolate_roots, refine, sturm_count

coeffs = st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=40)
polys = coeffs.map(IntPoly)


def _eval(cs, x):
    return sum(Fraction(int(c)) * x**i for i, c in enumerate(cs))


def _det(rows):
    # Fraction Gaussian elimination, independent of the package
    m = [[Fraction(x) for x in r] for r in rows]
    n, d = len(m), Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if m[r][i] != 0), None)
        if p is None:
            return Fraction(0)
        if p != i:
            m[i], m[p] = m[p], m[i]
            d = -d
        d *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    return d


@given(polys, polys, st.integers(-50, 50))
def test_product_evaluates_pointwise(p, q, x):
    assert _eval((p * q).coeffs, Fraction(x)) == _eval(p.coeffs, x) * _eval(q.coeffs, x)
    assert _eval((p + q).coeffs, Fraction(x)) == _eval(p.coeffs, x) + _eval(q.coeffs, x)


@pytest.mark.parametrize("seed", range(4))
def test_large_product_matches_schoolbook(seed):
    rng = np.random.default_rng(seed)
    a = [int(x) for x in rng.integers(-48, 49, size=700)]
    b = [int(x) * 10**40 + 1 for x in rng.integers(-5, 5, size=600)]
    want = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                want[i + j] += x * y
    assert (IntPoly(a) * IntPoly(b)) == IntPoly(want)


@given(polys, polys.filter(lambda q: not q.is_zero()))
def test_exact_division_round_trip(p, q):
    assert (p * q).exact_div(q) == p


def test_exact_division_rejects_remainder():
    with pytest.raises(NotDivisibleError):
        IntPoly([1, 0, 1]).exact_div(IntPoly([1, 1]))


@given(polys.filter(lambda q: q.degree >= 1), polys)
def test_pseudo_division_identity(d, p):
    q, r = p.pseudo_divmod(d)
    k = max(p.degree - d.degree + 1, 0)
    assert IntPoly([d.lc**k]) * p == q * d + r
    assert r.is_zero() or r.degree < d.degree


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6, unique=True))
def test_from_roots_signs(roots):
    p = IntPoly.from_roots(roots)
    for r in roots:
        assert p.sign_at(r) == 0
    assert p.squarefree_part().degree == len(roots)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5))
def test_squarefree_part_drops_multiplicity(roots):
    p = IntPoly.from_roots(roots + roots)
    assert p.squarefree_part().degree == len(set(roots))
    assert is_squarefree(p.squarefree_part())
    assert not is_squarefree(p)


def test_coprime_detection():
    a = IntPoly.from_roots([1, 2])
    assert coprime(a, IntPoly.from_roots([3, 4]))
    assert not coprime(a, IntPoly.from_roots([2, 5]))


square_matrices = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(square_matrices)
def test_charpoly_routes_match_determinant(rows):
    m = np.array(rows, dtype=object)
    n = len(rows)
    p = charpoly_bareiss(m)
    assert p == charpoly_crt(m) and p == charpoly(m)
    assert p.degree == n and p.lc == 1
    for t in range(-n - 1, n + 2):
        shifted = [[(t if i == j else 0) - rows[i][j] for j in range(n)] for i in range(n)]
        assert _eval(p.coeffs, Fraction(t)) == _det(shifted)


def test_charpoly_large_entries_crt():
    rng = np.random.default_rng(3)
    m = rng.integers(-10**5, 10**5, size=(20, 20))
    m = m + m.T
    assert charpoly_crt(m) == charpoly_bareiss(m.astype(object))


@given(st.lists(st.fractions(min_value=0, max_value=8, max_denominator=50), min_size=1, max_size=6, unique=True))
def test_isolation_separates_rational_roots(roots):
    p = IntPoly([1])
    for r in roots:
        p = p * IntPoly([-r.numerator, r.denominator])
    got = isolate_roots(p, -1, 9)
    assert len(got) == len(roots) == sturm_count(p, -1, 9)
    for iv, r in zip(got, sorted(roots)):
        assert iv.contains(mpq(r.numerator, r.denominator))
        for other in got:
            if other is not iv:
                assert not other.contains(mpq(r.numerator, r.denominator))


@pytest.mark.parametrize("width", [mpq(1, 2**20), mpq(1, 2**100)])
def test_refine_keeps_root(width):
    p = IntPoly([-2, 0, 1])
    iv = [i for i in isolate_roots(p, 0, 8)][0]
    r = refine(iv, width)
    assert r.width <= width
    assert p.sign_at(r.lo) < 0 < p.sign_at(r.hi)
    assert abs(float(r.midpoint) - 2**0.5) <= float(width) + 1e-16


def test_rational_function_poles():
    f = RationalFunction(IntPoly([1, 1]), IntPoly([-2, 1]))
    assert rf_eval(f, 3) == 4
    assert is_pole(rf_eval(f, 2))
    assert RationalFunction(IntPoly([-2, 1]), IntPoly([-2, 1])).num == IntPoly([1])
