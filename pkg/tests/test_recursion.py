import mpmath
import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from basilica.exact.charpoly import charpoly
from basilica.exact.modular import coprime, is_squarefree
from basilica.exact.poly import LAMBDA, ONE, IntPoly
from basilica.exact.rational import rf_eval, is_pole
from basilica.graphs import Mask, build_g, laplacian, vertex_count_formula
from basilica.recursion import (
    SpectralSequence,
    cubic_roots,
    degree_eta,
    degree_gamma,
    degree_gamma_closed,
    g_product,
    initial_triples,
    multiplicity_S,
    multiplicity_S_table,
    three_term_residual,
    zeta_initial,
    zeta_step,
)

L = LAMBDA


@pytest.mark.parametrize("n", range(0, 4))
def test_initial_triples_match_determinants(n):
    t = initial_triples()[n]
    g = build_g(n)
    assert charpoly(laplacian(g, Mask.A).matrix) == t.a
    assert charpoly(laplacian(g, Mask.B).matrix) == t.b
    assert charpoly(laplacian(g, Mask.C).matrix) == t.c
    t.check()


@pytest.mark.parametrize("route", ["c_only", "abc"])
@pytest.mark.parametrize("n", range(0, 9))
def test_recursion_matches_determinant(route, n):
    s = SpectralSequence(route)
    g = build_g(n)
    assert s.c(n) == charpoly(laplacian(g, Mask.C).matrix)
    assert s.b(n) == charpoly(laplacian(g, Mask.B).matrix)
    assert s.a(n) == charpoly(laplacian(g, Mask.A).matrix)
    if n >= 1:
        assert (L - 1) * s.c(n) - s.b(n) == charpoly(laplacian(g, Mask.D).matrix)
        assert (L - 1) * s.b(n) - s.a(n) == charpoly(laplacian(g, Mask.E).matrix)


def test_routes_agree_to_level_12(seq):
    other = SpectralSequence("abc")
    for n in range(0, 13):
        assert other.c(n) == seq.c(n)


@pytest.mark.parametrize("n", range(0, 12))
def test_g_product_matches_recursion(seq, n):
    want = ONE if n < 2 else seq.c(n - 1) * seq.g(n - 2).square()
    assert seq.g(n) == want == g_product(n, seq.c)


@pytest.mark.parametrize("n", range(0, 11))
def test_ac_identity(seq, n):
    assert seq.a(n) * seq.c(n) == seq.b(n).square() - seq.g(n).square()


@pytest.mark.parametrize("n", range(2, 11))
def test_three_term_relation(seq, n):
    assert three_term_residual(seq.triple(n), seq.triple(n - 2)).is_zero()


@pytest.mark.parametrize("n", range(1, 13))
def test_factorization_product(seq, n):
    fac = seq.factorization(n)
    want = seq.gamma(n)
    for k in range(1, n):
        want = want * seq.gamma(k) ** multiplicity_S(n - k)
    assert fac.product() == want == seq.c(n)
    assert fac.degree() == vertex_count_formula(n) - 2
    ks = [k for k, _, _ in fac.factors]
    assert ks == sorted(ks, reverse=True)
    assert all(e > 0 for _, _, e in fac.factors)


def test_gammas_pairwise_coprime_and_squarefree(seq):
    gs = [seq.gamma(k) for k in range(1, 13)]
    for i, p in enumerate(gs):
        assert is_squarefree(p)
        for q in gs[:i]:
            assert coprime(p, q)


def test_low_gammas():
    s = SpectralSequence()
    assert s.gamma(1) == L - 2
    assert s.gamma(2) == L * L - 6 * L + 4
    assert s.gamma(3) == IntPoly([8, -44, 42, -12, 1])


@pytest.mark.parametrize("n", range(4, 12))
def test_gamma_eta_identity(seq, n):
    assert seq.gamma_identity_check(n)
    assert seq.gamma_from_identity(n) == seq.gamma(n)


@pytest.mark.parametrize("n", range(4, 8))
def test_gamma_identity_detects_mutation(seq, n):
    assert not seq.gamma_identity_check(n, {n - 1: seq.gamma(n - 1) + ONE})
    assert not seq.gamma_identity_check(n, {n: seq.gamma(n) * (L - 9)})


@pytest.mark.parametrize("n", range(1, 13))
def test_zeta_identity(seq, n):
    assert seq.zeta_identity(n)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=0, max_value=8, max_denominator=997))
def test_pointwise_zeta_recursion_matches_rational_functions(seq, x):
    x = mpq(x.numerator, x.denominator)
    z = [None, x - 2, *(rf_eval(f, x) for f in zeta_initial())]
    for k in range(4, 10):
        z.append(zeta_step(z[k - 2], z[k - 1]))
    for k in range(1, 10):
        want = rf_eval(seq.zeta(k), x)
        if is_pole(want) or is_pole(z[k]):
            continue
        assert z[k] == want


@pytest.mark.parametrize("m", range(0, 8))
def test_multiplicity_matches_eigensolver(m):
    # eigenvalue 2 is the root of gamma_1, so it appears S_m times in G_{m+1}
    ev = np.linalg.eigvalsh(laplacian(build_g(m + 1), Mask.C).matrix.astype(float))
    assert int(np.sum(np.abs(ev - 2) < 1e-8)) == multiplicity_S(m)


def test_multiplicity_closed_form_matches_recursion():
    assert multiplicity_S_table(60) == [multiplicity_S(m) for m in range(61)]


def test_degrees_closed_form():
    assert degree_gamma(3) == 4
    for n in range(1, 31):
        x = degree_gamma_closed(n)
        assert abs(x - degree_gamma(n)) < mpmath.mpf("1e-6")


@pytest.mark.parametrize("n", range(1, 13))
def test_constructed_degrees(seq, n):
    assert seq.gamma(n).degree == degree_gamma(n)
    assert seq.eta(n).degree == degree_eta(n)


def test_cubic_roots():
    roots, phi, ivs = cubic_roots()
    for r in roots:
        assert abs(r**3 - r**2 - 2 * r + 1) < mpmath.mpf(2) ** -100
    assert sorted(roots) == list(roots)


def test_eta_sign_rule(seq):
    # sign(eta_n) = sign(gamma_{n-1}) sign(gamma_{n-3}) at points off all roots
    for x in (mpq(1, 3), mpq(7, 5), mpq(5, 2), mpq(61, 10)):
        for n in range(4, 11):
            lhs = seq.eta(n).sign_at(x)
            rhs = seq.gamma(n - 1).sign_at(x) * seq.gamma(n - 3).sign_at(x)
            assert lhs == rhs


def test_negative_levels_rejected(seq):
    with pytest.raises(ValueError):
        seq.factorization(0)
    with pytest.raises(ValueError):
        multiplicity_S(-1)
