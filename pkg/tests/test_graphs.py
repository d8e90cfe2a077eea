import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from basilica.graphs import (
    Address,
    Mask,
    automaton_a,
    automaton_b,
    build_g,
    build_g_recursive,
    build_gamma,
    build_gamma_from_automaton,
    decompose_g,
    deleted_vertices,
    is_automorphism,
    laplacian,
    laplacian_sparse,
    reflection,
    vertex_count_formula,
)

words = st.integers(1, 12).flatmap(lambda n: st.text("01", min_size=n, max_size=n))


@given(words)
def test_generators_are_permutations_of_each_level(w):
    # a and b preserve length and are invertible on each level, checked by brute force
    n = len(w)
    assert len(automaton_a(w)) == n and len(automaton_b(w)) == n


@pytest.mark.parametrize("n", range(1, 9))
def test_generators_bijective(n):
    level = ["".join(p) for p in itertools.product("01", repeat=n)]
    assert sorted(map(automaton_a, level)) == level
    assert sorted(map(automaton_b, level)) == level


@pytest.mark.parametrize("n", range(1, 10))
def test_schreier_graph_matches_automaton(n):
    assert build_gamma(n).structure() == build_gamma_from_automaton(n).structure()


@pytest.mark.parametrize("n", range(1, 10))
def test_schreier_graph_is_four_regular(n):
    g = build_gamma(n)
    # every vertex has two a-ends and two b-ends, loops counting twice
    for v in g.vertices:
        ends = 2 * sum(m for (u, _), m in g.loops.items() if u == v)
        ends += sum(m for (a, b, _), m in g.edges.items() if v in (a, b))
        assert ends == 4


@pytest.mark.parametrize("n", range(0, 13))
def test_vertex_count(n):
    assert len(build_g(n)) == vertex_count_formula(n)


@pytest.mark.parametrize("n", range(2, 11))
def test_recursive_construction_matches_split(n):
    assert build_g_recursive(n).structure() == build_g(n).structure()


@pytest.mark.parametrize("n", range(3, 10))
def test_decomposition_reassembles(n):
    d = decompose_g(n)
    assert d.reconstruct().structure() == build_g(n).structure()
    # the three pieces cover every vertex once, apart from the shared junction
    sizes = sum(len(p) for p in d.images())
    assert sizes >= len(build_g(n))


@pytest.mark.parametrize("n", range(2, 10))
def test_reflection_is_involutive_automorphism(n):
    g = build_g(n)
    r = reflection(n)
    assert is_automorphism(g, r)
    assert all(r[r[v]] == v for v in g.vertices)
    bx, by = g.boundary
    assert r[bx] == by


@pytest.mark.parametrize("n", range(0, 8))
@pytest.mark.parametrize("mask", list(Mask))
def test_laplacian_symmetric_and_sparse_agree(n, mask):
    g = build_g(n)
    if n == 0 and mask in (Mask.D, Mask.E):
        with pytest.raises(ValueError):
            laplacian(g, mask)
        return
    lap = laplacian(g, mask)
    m = lap.matrix
    assert np.array_equal(m, m.T)
    assert lap.size == len(g) - len(deleted_vertices(g, mask))
    sparse, order = laplacian_sparse(g, mask)
    assert order == lap.vertices
    assert np.array_equal(sparse.toarray(), m)


@pytest.mark.parametrize("n", range(1, 8))
def test_neumann_laplacian_kills_constants(n):
    m = laplacian(build_g(n), Mask.A).matrix
    assert not m.sum(axis=1).any()


def test_small_dirichlet_matrix():
    lap = laplacian(build_g(2), Mask.C)
    assert lap.matrix.tolist() == [[4, -2], [-2, 2]]


def test_schreier_laplacian_flags_loops():
    assert laplacian(build_gamma(3)).warning is not None
    assert laplacian(build_g(3)).warning is None


@given(words, st.sampled_from(["", "x", "y"]))
def test_address_round_trip(w, marker):
    a = Address(w, marker)
    assert Address.parse(str(a)) == a


def test_reflection_needs_level_two():
    with pytest.raises(ValueError):
        reflection(1)


def test_negative_level_rejected():
    with pytest.raises(ValueError):
        build_g(-1)
