import numpy as np
import pytest
from gmpy2 import mpq

from basilica.exact.roots import sturm_count
from basilica.gaps import (
    GapCertifier,
    certify_gap,
    escape_samples,
    gap_enumerate,
    gap_side,
    gaps_to_csv,
)
from basilica.spectrum import dirichlet_eigenvalues


@pytest.fixture(scope="module")
def gaps8(iso):
    return gap_enumerate(8, mpq(1, 1000), iso=iso)


def test_enumeration_is_sorted_and_disjoint(gaps8):
    assert len(gaps8) > 10
    assert all(g.ok and g.width >= mpq(1, 1000) for g in gaps8)
    for a, b in zip(gaps8, gaps8[1:]):
        assert a.hi <= b.lo


def test_gaps_avoid_higher_level_roots(iso, gaps8):
    # levels 9..11 are not used by the enumeration at max_level 8
    roots = [iv for iv, _ in iso.all_roots(11)]
    for g in gaps8:
        assert all(iv.hi <= g.lo or iv.lo >= g.hi for iv in roots)


@pytest.mark.parametrize("k", range(1, 9))
def test_gaps_have_no_roots_by_sturm(seq, gaps8, k):
    p = seq.gamma(k)
    for g in gaps8[::4]:
        assert sturm_count(p, g.lo, g.hi) == 0


def test_gaps_avoid_numerical_spectrum(gaps8):
    ev = dirichlet_eigenvalues(12)
    for g in gaps8:
        lo, hi = float(g.lo), float(g.hi)
        assert not np.any((ev > lo + 1e-9) & (ev < hi - 1e-9))


def test_exact_and_interval_routes_agree(seq, gaps8):
    cert = GapCertifier(seq)
    for g in gaps8[::6]:
        a = (3 * g.lo + g.hi) / 4
        b = (g.lo + 3 * g.hi) / 4
        assert cert.certify(a, b, 8, route="exact").ok
        assert cert.certify(a, b, 60, route="interval").ok


def test_top_of_spectrum_gap():
    c = certify_gap(mpq(15, 2), 8, route="exact")
    assert c.ok and c.route == "exact"


def test_interval_containing_eigenvalue_fails():
    f = certify_gap(mpq(19, 10), mpq(21, 10))
    assert not f.ok and f.reason == "known-eigenvalue"


def test_degenerate_interval_rejected():
    with pytest.raises(ValueError):
        certify_gap(mpq(3), mpq(2))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_gap_side_low_levels(iso, seq, k):
    for iv in iso.level(k).roots:
        side = gap_side(k, iv, iso)
        assert side.gap in ("left", "right")
        assert side.certificate is not None and side.certificate.ok
        assert side.distances_decreasing
        # the certified gap sits on the stated side of the root
        if side.gap == "right":
            assert side.certificate.lo >= iv.hi - iv.width
        else:
            assert side.certificate.hi <= iv.lo + iv.width
        for lvl, root, *_ in side.evidence:
            assert (lvl - k) % 2 == 0 and lvl > k


def test_escape_samples_grow(gaps8):
    samples = escape_samples(gaps8, count=20, steps=30, seed=1)
    assert len(samples) == 20
    for x, z in samples:
        assert any(g.lo < x < g.hi for g in gaps8)
        assert len(z) == 30
        assert z[-1] > 2 and z[-1] > z[-3]


def test_escape_samples_deterministic(gaps8):
    a = escape_samples(gaps8, count=5, seed=7)
    b = escape_samples(gaps8, count=5, seed=7)
    assert [x for x, _ in a] == [x for x, _ in b]


def test_gap_csv(gaps8):
    text = gaps_to_csv(gaps8[:3])
    rows = text.strip().split("\n")
    assert rows[0] == "lo_num,lo_den,hi_num,hi_den,base_depth"
    assert len(rows) == 4
    lo_num, lo_den = map(int, rows[1].split(",")[:2])
    assert mpq(lo_num, lo_den) == gaps8[0].lo
