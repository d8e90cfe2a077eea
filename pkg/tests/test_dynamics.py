import gmpy2
import pytest
from gmpy2 import mpfr, mpq
from hypothesis import given, settings, strategies as st

from basilica.dynamics import (
    Interval,
    IntervalError,
    certified_gamma_signs,
    escape_depth,
    zeta_enclosures,
    zeta_newton_root,
    zeta_values,
)
from basilica.exact.rational import is_pole, rf_eval
from basilica.exact.roots import sturm_count

points = st.fractions(min_value=0, max_value=8, max_denominator=10**4)


def _contains(iv, q):
    return mpq(iv.lo) <= q <= mpq(iv.hi)


@settings(max_examples=60, deadline=None)
@given(points, points)
def test_interval_ops_enclose_exact_results(a, b):
    qa, qb = mpq(a.numerator, a.denominator), mpq(b.numerator, b.denominator)
    A, B = Interval.from_rational(qa), Interval.from_rational(qb)
    assert _contains(A + B, qa + qb)
    assert _contains(A - B, qa - qb)
    assert _contains(A * B, qa * qb)
    assert _contains(A.square(), qa * qa)
    if qb != 0:
        assert _contains(A / B, qa / qb)


def test_division_by_zero_interval():
    with pytest.raises(IntervalError):
        Interval(mpfr(-1), mpfr(1)).reciprocal()


@settings(max_examples=60, deadline=None)
@given(points)
def test_zeta_enclosures_contain_rational_values(seq, x):
    q = mpq(x.numerator, x.denominator)
    try:
        encl = zeta_enclosures(q, 10)
    except IntervalError:
        return
    for k, e in enumerate(encl, start=1):
        exact = rf_eval(seq.zeta(k), q)
        if is_pole(exact):
            return
        assert _contains(e, exact)


@settings(max_examples=60, deadline=None)
@given(points)
def test_certified_signs_match_polynomials(seq, x):
    q = mpq(x.numerator, x.denominator)
    signs = certified_gamma_signs(q, 10)
    if signs is None:
        return
    assert signs == [seq.gamma(k).sign_at(q) for k in range(1, 11)]


def test_escape_left_of_spectrum_and_at_top():
    assert escape_depth((mpq(8), mpq(8)), 10)[0] == "escape"
    assert escape_depth((mpq(2), mpq(2)), 10)[0] == "split"


@pytest.mark.parametrize("lo,hi", [(mpq(15, 2), mpq(8)), (mpq(79, 10), mpq(8))])
def test_escape_interval_has_no_roots(seq, lo, hi):
    verdict, _ = escape_depth((lo, hi), 30)
    assert verdict == "escape"
    for k in range(1, 11):
        assert sturm_count(seq.gamma(k), lo, hi) == 0 and seq.gamma(k).sign_at(lo) != 0


@pytest.mark.parametrize("k", range(2, 9))
def test_newton_root_lands_in_isolating_interval(iso, k):
    for iv in iso.level(k).roots[:: max(1, len(iso.level(k).roots) // 5)]:
        x = zeta_newton_root(k, iv.lo, iv.hi)
        assert iv.lo <= mpq(x) <= iv.hi


def test_zeta_derivative_matches_difference_quotient():
    with gmpy2.context(gmpy2.get_context(), precision=200):
        x = mpfr(mpq(7, 2))
        h = mpfr(2) ** -60
        z, d = zeta_values(x, 8)
        zp, _ = zeta_values(x + h, 8)
        zm, _ = zeta_values(x - h, 8)
        for k in range(8):
            fd = (zp[k] - zm[k]) / (2 * h)
            assert abs(fd - d[k]) <= mpfr(2) ** -80 * max(1, abs(d[k]))
