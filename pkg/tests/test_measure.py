import mpmath
import pytest
from gmpy2 import mpq

from basilica.graphs import vertex_count_formula
from basilica.measure import (
    limit_proportion,
    limit_tail,
    limit_weight,
    mass_horizon,
    mass_on_levels,
    spectral_measure,
    tail_sum,
    tail_sum_direct,
    total_mass,
    weight,
    weight_bound_holds,
)
from basilica.recursion import cubic_roots


@pytest.mark.parametrize("n", range(1, 11))
def test_measure_is_a_probability(iso, n):
    atoms = spectral_measure(n, iso)
    assert total_mass(atoms) == 1
    assert len(atoms) == sum(1 for a in atoms if a.weight > 0)
    assert [a.root.lo for a in atoms] == sorted(a.root.lo for a in atoms)


def test_level_three_weights(iso):
    atoms = spectral_measure(3, iso)
    assert {a.level for a in atoms} == {1, 3}
    assert all(a.weight == mpq(1, vertex_count_formula(3) - 2) for a in atoms)


@pytest.mark.parametrize("n", range(1, 21))
def test_weight_bound(n):
    assert all(weight_bound_holds(n, k) for k in range(1, n + 1))


def test_weights_converge():
    for k in range(1, 6):
        assert abs(weight(60, k) - limit_weight(k)) < mpq(1, 10**12)


@pytest.mark.parametrize("j", range(3))
@pytest.mark.parametrize("m", range(0, 11))
def test_tail_sum_closed_form(m, j):
    rho = cubic_roots()[0][j]
    assert abs(tail_sum(m, m, rho)) < mpmath.mpf(10) ** -12
    for n in range(m + 1, 21):
        want = tail_sum_direct(m, n, rho)
        assert abs(tail_sum(m, n, rho) - want) <= mpmath.mpf("1e-10") * abs(want)


@pytest.mark.parametrize("m", [0, 1, 3, 6, 10, 14])
def test_limit_tail_matches_large_level(m):
    exact = 1 - mass_on_levels(120, m) if m else mpq(1)
    with mpmath.workdps(40):
        assert abs(limit_tail(m) - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.mpf(10) ** -20


def test_limit_tail_starts_at_one():
    assert abs(limit_tail(0) - 1) < mpmath.mpf(10) ** -30


def test_limit_proportion_monotone():
    vals = [limit_proportion(m) for m in range(1, 20)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert 0.74 <= limit_proportion(14) <= 0.78


@pytest.mark.parametrize("n", range(1, 11))
def test_mass_on_levels_matches_atoms(iso, n):
    atoms = spectral_measure(n, iso)
    for m in range(1, n + 1):
        assert mass_on_levels(n, m) == sum((a.weight for a in atoms if a.level <= m), mpq(0))


@pytest.mark.parametrize("eps", ["0.5", "0.1", "0.01", "0.001"])
def test_mass_horizon_bounds_the_tail(eps):
    m = mass_horizon(mpmath.mpf(eps))
    assert limit_tail(m) < mpmath.mpf(eps)
    for n in (m + 20, m + 40):
        assert 1 - mass_on_levels(n, m) < mpq(eps)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        weight(3, 4)
    with pytest.raises(ValueError):
        mass_horizon(2)
