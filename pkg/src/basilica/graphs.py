"""Schreier graphs of the Basilica group and their two-boundary pieces.

``build_gamma(n)`` grows the level-n Schreier graph from level 1 with the edge
replacement rules, tracking the direction in which each generator moves a
vertex (needed to know where the new middle vertex of an a-edge goes).
``build_g(n)`` splits the vertex 0^n of that graph into four boundary
vertices; the larger of the two resulting components is G_n.

Vertices are addressed by binary words.  Boundary vertices of G_n carry the
word 0^(n-1) and a marker ``"x"`` or ``"y"``; for n >= 3 the x-boundary is
the one whose neighbour's word ends in 0.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

import numpy as np

__all__ = [
    "Address",
    "MultiGraph",
    "Mask",
    "Laplacian",
    "Decomposition",
    "automaton_a",
    "automaton_b",
    "build_gamma",
    "build_gamma_from_automaton",
    "build_g",
    "build_g_recursive",
    "decompose_g",
    "vertex_count_formula",
    "laplacian",
    "laplacian_sparse",
    "reflection",
    "is_automorphism",
    "deleted_vertices",
]


class Address(NamedTuple):
    """A vertex: a binary word plus an optional boundary marker ``x``/``y``."""

    word: str
    marker: str = ""

    @property
    def is_boundary(self) -> bool:
        return bool(self.marker)

    def __str__(self) -> str:
        return self.word + self.marker

    @classmethod
    def parse(cls, text: str) -> "Address":
        if text.endswith(("x", "y")):
            return cls(text[:-1], text[-1])
        return cls(text, "")


@dataclass(frozen=True)
class MultiGraph:
    """Finite multigraph with a/b-labelled edges, loops and boundary vertices.

    ``edges`` maps ``(u, v, label)`` with ``u < v`` to a multiplicity;
    ``loops`` maps ``(v, label)`` to a count.  Vertices are kept sorted.
    """

    vertices: tuple
    edges: Mapping
    loops: Mapping
    boundary: tuple = ()
    level: int | None = None
    kind: str = "G"
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})
        object.__setattr__(self, "edges", dict(sorted(self.edges.items())))
        object.__setattr__(self, "loops", dict(sorted(self.loops.items())))

    @property
    def index(self) -> dict:
        return self._index

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"MultiGraph({self.kind}_{self.level}, {len(self.vertices)} vertices, {len(self.edges)} edge classes)"

    def weights(self) -> dict:
        """Total multiplicity c_xy per unordered pair, summed over labels."""
        w: dict = defaultdict(int)
        for (u, v, _), m in self.edges.items():
            w[(u, v)] += m
        return dict(w)

    def neighbours(self, v) -> dict:
        """Map neighbour -> c_xy (loops excluded)."""
        out: dict = defaultdict(int)
        for (a, b, _), m in self.edges.items():
            if a == v:
                out[b] += m
            elif b == v:
                out[a] += m
        return dict(out)

    def adjacency(self) -> dict:
        adj: dict = {v: defaultdict(int) for v in self.vertices}
        for (a, b, _), m in self.edges.items():
            adj[a][b] += m
            adj[b][a] += m
        return adj

    def degree(self, v) -> int:
        """Number of non-loop edge ends at ``v``."""
        return sum(self.neighbours(v).values())

    def boundary_neighbour(self, b) -> Address:
        (nb,) = self.neighbours(b)
        return nb

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def relabel(self, mapping: Mapping) -> "MultiGraph":
        """Image under an injective vertex map."""
        edges: dict = defaultdict(int)
        for (a, b, lab), m in self.edges.items():
            x, y = sorted((mapping[a], mapping[b]))
            edges[(x, y, lab)] += m
        loops: dict = defaultdict(int)
        for (v, lab), m in self.loops.items():
            loops[(mapping[v], lab)] += m
        return MultiGraph(
            tuple(mapping[v] for v in self.vertices),
            edges,
            loops,
            tuple(mapping[b] for b in self.boundary),
            self.level,
            self.kind,
        )

    def structure(self) -> tuple:
        """Hashable description used for exact equality of labelled graphs."""
        return (self.vertices, tuple(self.edges.items()), tuple(self.loops.items()), tuple(self.boundary))


def _undirected(directed: Iterable[tuple], boundary=(), level=None, kind="G") -> MultiGraph:
    """Collapse directed generator edges (src, dst, label) into a MultiGraph."""
    verts: set = set()
    edges: dict = defaultdict(int)
    loops: dict = defaultdict(int)
    for s, t, lab in directed:
        verts.add(s)
        verts.add(t)
        if s == t:
            loops[(s, lab)] += 1
        else:
            a, b = sorted((s, t))
            edges[(a, b, lab)] += 1
    return MultiGraph(tuple(verts), edges, loops, tuple(boundary), level, kind)


# --- Schreier graphs --------------------------------------------------------------


def automaton_a(w: str) -> str:
    """Action of the generator a on a word: a(1w)=1w, a(0w)=0b(w)."""
    if not w:
        return w
    return w if w[0] == "1" else "0" + automaton_b(w[1:])


def automaton_b(w: str) -> str:
    """Action of the generator b on a word: b(1w)=0w, b(0w)=1a(w)."""
    if not w:
        return w
    return "0" + w[1:] if w[0] == "1" else "1" + automaton_a(w[1:])


def _gamma_directed(n: int) -> list[tuple]:
    """Directed generator edges of the level-n Schreier graph via the replacement rules."""
    edges = [
        (Address("0"), Address("0"), "a"),
        (Address("1"), Address("1"), "a"),
        (Address("0"), Address("1"), "b"),
        (Address("1"), Address("0"), "b"),
    ]
    for _ in range(n - 1):
        new = []
        for s, t, lab in edges:
            if lab == "b":
                # b-edge w -> z becomes the a-edge 0w -> 0z
                new.append((Address("0" + s.word), Address("0" + t.word), "a"))
            else:
                # a-edge w -> z: new middle vertex 1z carries an a-loop and
                # b-edges 0w -> 1z -> 0z (an a-loop at 1w gives a double edge)
                mid = Address("1" + t.word)
                new.append((Address("0" + s.word), mid, "b"))
                new.append((mid, Address("0" + t.word), "b"))
                new.append((mid, mid, "a"))
        edges = new
    return edges


def build_gamma(n: int) -> MultiGraph:
    """Level-n Schreier graph, obtained from level 1 by the replacement rules."""
    if n < 1:
        raise ValueError("the Schreier graph is defined for n >= 1")
    return _undirected(_gamma_directed(n), level=n, kind="Gamma")


def build_gamma_from_automaton(n: int) -> MultiGraph:
    """Same graph straight from the generator actions; used as a cross-check."""
    if n < 1:
        raise ValueError("the Schreier graph is defined for n >= 1")
    words = [format(i, f"0{n}b") for i in range(2**n)]
    directed = []
    for w in words:
        directed.append((Address(w), Address(automaton_a(w)), "a"))
        directed.append((Address(w), Address(automaton_b(w)), "b"))
    return _undirected(directed, level=n, kind="Gamma")


# --- the graphs G_n ---------------------------------------------------------------


def vertex_count_formula(n: int) -> int:
    """Number of vertices of G_n, (2^(n+2) + (-1)^(n+1) + 9) / 6."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    num = 2 ** (n + 2) + (-1) ** (n + 1) + 9
    assert num % 6 == 0
    return num // 6


@lru_cache(maxsize=None)
def build_g(n: int) -> MultiGraph:
    """G_n with boundary (x, y).

    G_0 is a single a-edge between two boundary vertices.  For n >= 1 the
    vertex 0^n of the Schreier graph is split into one new vertex per incident
    edge end, and G_n is the larger resulting component.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        x, y = Address("", "x"), Address("", "y")
        return MultiGraph((x, y), {(x, y, "a"): 1}, {}, (x, y), 0, "G")
    gamma = build_gamma(n)
    centre = Address("0" * n)
    edges: list[tuple] = []
    stubs: list[tuple] = []  # (new boundary vertex, neighbour or None)
    counter = 0

    def stub() -> tuple:
        nonlocal counter
        counter += 1
        return ("stub", counter)

    for (a, b, lab), m in gamma.edges.items():
        if centre in (a, b):
            other = b if a == centre else a
            for _ in range(m):
                s = stub()
                edges.append((s, other, lab))
                stubs.append((s, other))
        else:
            edges.extend([(a, b, lab)] * m)
    loops = []
    for (v, lab), m in gamma.loops.items():
        if v == centre:
            # a loop at the split vertex becomes an edge between two new vertices
            for _ in range(m):
                s, t = stub(), stub()
                edges.append((s, t, lab))
                stubs.extend([(s, None), (t, None)])
        else:
            loops.extend([(v, lab)] * m)

    # components of the split graph
    adj: dict = defaultdict(set)
    for a, b, _ in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen: dict = {}
    comps = []
    for start in list(adj):
        if start in seen:
            continue
        comp = {start}
        seen[start] = len(comps)
        todo = [start]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in seen:
                    seen[w] = len(comps)
                    comp.add(w)
                    todo.append(w)
        comps.append(comp)
    big = max(comps, key=len)
    bstubs = [(s, nb) for s, nb in stubs if s in big]
    assert len(bstubs) == 2, "G_n must have exactly two boundary vertices"
    if n >= 3:
        bstubs.sort(key=lambda t: t[1].word[-1])  # neighbour ending in 0 first
    word = "0" * (n - 1)
    rename = {bstubs[0][0]: Address(word, "x"), bstubs[1][0]: Address(word, "y")}

    def r(v):
        return rename.get(v, v)

    directed = [(r(a), r(b), lab) for a, b, lab in edges if a in big]
    directed += [(v, v, lab) for v, lab in loops if v in big]
    verts = {r(v) for v in big}
    g = _undirected(directed, boundary=(rename[bstubs[0][0]], rename[bstubs[1][0]]), level=n, kind="G")
    assert set(g.vertices) == verts
    return g


# --- decomposition and reflection -------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """G_n as one copy of G_{n-1} and two copies of G_{n-2} glued at ``u``.

    Each ``*_map`` sends vertices of the smaller graph to vertices of G_n.
    The G_{n-1} copy has both boundaries at u; the left copy keeps G_n's
    x-boundary and the right copy its y-boundary.
    """

    n: int
    graph: MultiGraph
    u: Address
    decoration: MultiGraph
    left: MultiGraph
    right: MultiGraph
    decoration_map: dict
    left_map: dict
    right_map: dict

    def images(self) -> list[MultiGraph]:
        return [
            self.decoration.relabel(self.decoration_map),
            self.left.relabel(self.left_map),
            self.right.relabel(self.right_map),
        ]

    def reconstruct(self) -> MultiGraph:
        """Union of the three images, with boundary (x, y) of G_n."""
        edges: dict = defaultdict(int)
        loops: dict = defaultdict(int)
        verts: set = set()
        for img in self.images():
            verts.update(img.vertices)
            for k, m in img.edges.items():
                edges[k] += m
            for k, m in img.loops.items():
                loops[k] += m
        x = self.left_map[self.left.boundary[0]]
        y = self.right_map[self.right.boundary[1]]
        return MultiGraph(tuple(verts), edges, loops, (x, y), self.n, "G")


def embedding_maps(n: int) -> tuple[dict, dict, dict]:
    """Address maps of the G_{n-1} copy and of the left/right G_{n-2} copies in G_n."""
    if n < 2:
        raise ValueError("decomposition needs n >= 2")
    big = build_g(n)
    x, y = big.boundary
    u = Address("0" * (n - 1) + "1")
    deco_g, small = build_g(n - 1), build_g(n - 2)
    deco = {v: (u if v.is_boundary else Address(v.word + "1")) for v in deco_g.vertices}
    sx, sy = small.boundary
    left = {v: Address(v.word + "00") for v in small.vertices if not v.is_boundary}
    left.update({sx: x, sy: u})
    right = {v: Address(v.word + "01") for v in small.vertices if not v.is_boundary}
    right.update({sx: u, sy: y})
    return deco, left, right


@lru_cache(maxsize=None)
def decompose_g(n: int) -> Decomposition:
    """Split G_n into its G_{n-1} decoration and two G_{n-2} copies."""
    if n < 2:
        raise ValueError("decomposition needs n >= 2")
    deco, left, right = embedding_maps(n)
    return Decomposition(
        n=n,
        graph=build_g(n),
        u=Address("0" * (n - 1) + "1"),
        decoration=build_g(n - 1),
        left=build_g(n - 2),
        right=build_g(n - 2),
        decoration_map=deco,
        left_map=left,
        right_map=right,
    )


def build_g_recursive(n: int) -> MultiGraph:
    """G_n assembled purely from the decomposition maps, starting at G_0 and G_1.

    Independent of the Schreier-graph splitting in :func:`build_g` except
    for the base cases.
    """
    if n <= 1:
        return build_g(n)
    prev2, prev1 = build_g(0), build_g(1)
    for k in range(2, n + 1):
        x, y = Address("0" * (k - 1), "x"), Address("0" * (k - 1), "y")
        u = Address("0" * (k - 1) + "1")
        deco = {v: (u if v.is_boundary else Address(v.word + "1")) for v in prev1.vertices}
        sx, sy = prev2.boundary
        left = {v: Address(v.word + "00") for v in prev2.vertices if not v.is_boundary}
        left.update({sx: x, sy: u})
        right = {v: Address(v.word + "01") for v in prev2.vertices if not v.is_boundary}
        right.update({sx: u, sy: y})
        edges: dict = defaultdict(int)
        loops: dict = defaultdict(int)
        verts: set = set()
        for g, mp in ((prev1, deco), (prev2, left), (prev2, right)):
            img = g.relabel(mp)
            verts.update(img.vertices)
            for key, m in img.edges.items():
                edges[key] += m
            for key, m in img.loops.items():
                loops[key] += m
        cur = MultiGraph(tuple(verts), edges, loops, (x, y), k, "G")
        prev2, prev1 = prev1, cur
    return prev1


def _swap_boundary(g: MultiGraph) -> dict:
    perm = {v: v for v in g.vertices}
    x, y = g.boundary
    perm[x], perm[y] = y, x
    return perm


@lru_cache(maxsize=None)
def _reflection(n: int) -> dict:
    g = build_g(n)
    if n < 2:
        # G_0 and G_1 are reflected by exchanging the boundary vertices
        return _swap_boundary(g)
    deco, left, right = embedding_maps(n)
    phi1, phi2 = _reflection(n - 1), _reflection(n - 2)
    perm = {}
    for v, image in deco.items():
        perm[image] = deco[phi1[v]]
    for v, image in left.items():
        perm[image] = right[phi2[v]]
    for v, image in right.items():
        perm[image] = left[phi2[v]]
    assert len(perm) == len(g.vertices)
    return perm


def is_automorphism(g: MultiGraph, perm: Mapping) -> bool:
    """True if ``perm`` preserves labelled edge multiplicities, loops and the boundary set."""
    h = g.relabel(perm)
    return (
        set(perm) == set(g.vertices)
        and set(perm.values()) == set(g.vertices)
        and h.edges == g.edges
        and h.loops == g.loops
        and set(h.boundary) == set(g.boundary)
    )


def reflection(n: int) -> dict:
    """The reflection of G_n through its gluing vertex, as a vertex permutation."""
    if n < 2:
        raise ValueError("the reflection is defined for n >= 2")
    return dict(_reflection(n))


# --- Laplacians -------------------------------------------------------------------


class Mask(enum.Enum):
    """Which vertices are deleted before taking the Laplacian.

    A keeps everything, B deletes the x-boundary, C both boundaries, D also
    the neighbour of y, and E the x-boundary together with its neighbour.
    """

    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"


def deleted_vertices(g: MultiGraph, mask: Mask | str) -> tuple:
    mask = Mask(mask)
    if mask is Mask.A:
        return ()
    if not g.boundary:
        raise ValueError("masks B-E need a graph with boundary")
    x, y = g.boundary
    if mask is Mask.B:
        return (x,)
    if mask is Mask.C:
        return (x, y)
    if g.level is not None and g.level < 1:
        raise ValueError("masks D and E need a boundary neighbour, i.e. n >= 1")
    if mask is Mask.D:
        return (x, y, g.boundary_neighbour(y))
    return (x, g.boundary_neighbour(x))


@dataclass(frozen=True)
class Laplacian:
    """Integer Laplacian restricted to the retained vertices.

    ``warning`` is set for Schreier graphs, whose Laplacian convention is not
    fixed by the theory of G_n (loops are ignored here as well).
    """

    matrix: np.ndarray
    vertices: tuple
    mask: Mask
    warning: str | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)


def laplacian(g: MultiGraph, mask: Mask | str = Mask.A) -> Laplacian:
    """L f(v) = sum_w c_vw (f(v) - f(w)); loops ignored, deleted rows/columns dropped.

    Diagonal entries always count all non-loop edges of the full graph, so
    deleting a vertex does not change its neighbours' diagonals.
    """
    mask = Mask(mask)
    gone = set(deleted_vertices(g, mask))
    keep = [v for v in g.vertices if v not in gone]
    idx = {v: i for i, v in enumerate(keep)}
    m = np.zeros((len(keep), len(keep)), dtype=np.int64)
    deg: dict = defaultdict(int)
    for (a, b, _), c in g.edges.items():
        deg[a] += c
        deg[b] += c
        if a in idx and b in idx:
            m[idx[a], idx[b]] -= c
            m[idx[b], idx[a]] -= c
    for v, i in idx.items():
        m[i, i] = deg[v]
    warning = None
    if g.kind == "Gamma":
        warning = "Schreier-graph Laplacian uses the G_n convention (loops ignored)"
    return Laplacian(m, tuple(keep), mask, warning)


def laplacian_sparse(g: MultiGraph, mask: Mask | str = Mask.C):
    """Same operator as :func:`laplacian` as a scipy CSR matrix of floats."""
    import scipy.sparse as sp

    mask = Mask(mask)
    gone = set(deleted_vertices(g, mask))
    keep = [v for v in g.vertices if v not in gone]
    idx = {v: i for i, v in enumerate(keep)}
    rows, cols, vals = [], [], []
    deg: dict = defaultdict(int)
    for (a, b, _), c in g.edges.items():
        deg[a] += c
        deg[b] += c
        if a in idx and b in idx:
            rows += [idx[a], idx[b]]
            cols += [idx[b], idx[a]]
            vals += [-float(c), -float(c)]
    for v, i in idx.items():
        rows.append(i)
        cols.append(i)
        vals.append(float(deg[v]))
    n = len(keep)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n)), tuple(keep)
