import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from basilica.exact.roots import isolate_roots
from basilica.recursion import degree_gamma, multiplicity_S
from basilica.spectrum import (
    SEARCH_HI,
    GammaSigns,
    dirichlet_eigenvalues,
    isolate_gamma,
    sturm_root_count,
)


@pytest.mark.parametrize("k", range(1, 11))
def test_sturm_count_equals_degree(seq, k):
    assert sturm_root_count(seq.gamma(k)) == degree_gamma(k) == seq.gamma(k).degree


@pytest.mark.parametrize("k", range(1, 12))
def test_isolating_intervals_bracket_sign_changes(iso, seq, k):
    p = seq.gamma(k)
    roots = iso.level(k).roots
    assert len(roots) == p.degree
    for iv in roots:
        # exact polynomial evaluation, independent of the interval-arithmetic signer
        assert p.sign_at(iv.lo) * p.sign_at(iv.hi) < 0
        assert 0 < iv.lo < iv.hi <= SEARCH_HI
    for a, b in zip(roots, roots[1:]):
        assert a.hi <= b.lo


@pytest.mark.parametrize("k", range(1, 8))
def test_sturm_and_sign_count_routes_agree(seq, k):
    sturm = isolate_gamma(k, seq, method="sturm")
    signs = isolate_gamma(k, seq, method="sign-count")
    assert len(sturm) == len(signs) == degree_gamma(k)
    for a, b in zip(sturm, signs):
        assert max(a.lo, b.lo) < min(a.hi, b.hi)


def test_levels_are_mutually_disjoint(iso):
    roots = iso.all_roots(11)
    assert len(roots) == sum(degree_gamma(k) for k in range(1, 12))
    for (a, _), (b, _) in zip(roots, roots[1:]):
        assert a.hi <= b.lo


@pytest.mark.parametrize("n", range(2, 10))
def test_dirichlet_spectrum_matches_eigensolver(iso, n):
    ev = dirichlet_eigenvalues(n)
    spec = iso.dirichlet_spectrum(n)
    assert sum(m for _, _, m in spec) == len(ev)
    expanded = np.array([float(iv.midpoint) for iv, _, m in spec for _ in range(m)])
    assert np.max(np.abs(np.sort(expanded) - ev)) < 1e-8
    for iv, k, m in spec:
        assert m == (1 if k == n else multiplicity_S(n - k))


def test_banded_solver_matches_dense():
    from scipy.linalg import eigvalsh

    from basilica.graphs import build_g, laplacian

    ev = dirichlet_eigenvalues(11)
    dense = eigvalsh(laplacian(build_g(11), "C").matrix.astype(float))
    assert np.max(np.abs(ev - dense)) < 1e-9


@settings(max_examples=80, deadline=None)
@given(st.fractions(min_value=0, max_value=8, max_denominator=10**6), st.integers(1, 9))
def test_certified_signs_match_exact_evaluation(seq, x, k):
    x = mpq(x.numerator, x.denominator)
    p = seq.gamma(k)
    if p.sign_at(x) == 0:
        return
    assert GammaSigns(seq).sign(k, x) == p.sign_at(x)


def test_signer_at_exact_root():
    from basilica.recursion import SpectralSequence

    s = SpectralSequence()
    assert GammaSigns(s).sign(1, 2) == 0


def test_narrow_intervals_are_certified(iso, seq):
    # intervals at the top level are narrow and still straddle a sign change
    roots = iso.level(10).roots
    assert max(iv.width for iv in roots) <= mpq(1, 2**98)
    p = seq.gamma(10)
    assert all(p.sign_at(iv.lo) != p.sign_at(iv.hi) for iv in roots)


def test_two_is_only_a_level_one_root(seq):
    assert [iv.contains(2) for iv in isolate_roots(seq.gamma(1), 0, 8)] == [True]
    for k in range(2, 11):
        assert seq.gamma(k).sign_at(2) != 0
