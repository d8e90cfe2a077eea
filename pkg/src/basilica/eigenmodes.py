"""Localized Dirichlet and Dirichlet-Neumann eigenfunctions on G_n and on blowup patches.

An eigenfunction is stored sparsely as a map vertex -> value on a graph,
with the vertices where the eigen-equation ``L f = lam f`` must hold.  At a
rational eigenvalue everything is exact (``mpq`` values, zero residual); at
an irrational one the values come from a dense symmetric eigen-solve and the
residual contract is ``max |(L - lam) f| < 1e-9 * max |f|``.

Constructions on G_n = G_{n-1} decoration + two G_{n-2} copies glued at u:

* ``copy_n2_left`` / ``copy_n2_right``: a Dirichlet-Neumann eigenfunction of G_{n-2}
  copied to one G_{n-2} copy;
* ``copy_n1_dn``: a Dirichlet-Neumann eigenfunction of G_{n-1} copied to the decoration;
* ``copy_n1_antisym``: a Dirichlet, non-Neumann, reflection-antisymmetric eigenfunction
  of G_{n-1} copied to the decoration;
* :func:`antisymmetrize`: a Dirichlet, non-Neumann eigenfunction of G_{n-2} placed on
  the left copy minus its reflection (Dirichlet but not Neumann on G_n).

A blowup patch is G_{k_N} seen through the chain of embeddings
G_{k_1} -> G_{k_2} -> ... with k_1 = 2 and increments ``1`` (append 1, both boundaries
to the gluing vertex), ``2a`` (append 00, y to the gluing vertex) or ``2b``
(append 01, x to the gluing vertex); optionally cut down to a ball.
"""

from __future__ import annotations

import bisect
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from .exact.roots import IsolatingInterval
from .graphs import Address, MultiGraph, Mask, build_g, embedding_maps, laplacian, _reflection
from .recursion import multiplicity_S
from .spectrum import SpectrumIsolation

__all__ = [
    "EigenFunction",
    "ConstructionError",
    "NUMERIC_RTOL",
    "reflection_map",
    "residual",
    "satisfies_contract",
    "is_dirichlet",
    "is_neumann",
    "is_antisymmetric",
    "eigenspace",
    "dirichlet_clusters",
    "dn_eigenfunctions",
    "antisym_non_neumann",
    "non_neumann",
    "dn_construct",
    "antisymmetrize",
    "span_rank",
    "MultiplicityReport",
    "multiplicity_crosscheck",
    "BlowupPatch",
    "parse_increments",
    "build_patch",
    "chain_map",
    "extend_by_zero",
    "place",
    "antisym_member_check",
    "localized_span_ratio",
    "localized_span",
]

NUMERIC_RTOL = 1e-9
# numeric eigenvalues closer than this belong to the same eigenspace; roots of
# different levels can be 2e-8 apart, so this must stay well below that
CLUSTER_TOL = 1e-10
MODES = ("copy_n2_left", "copy_n2_right", "copy_n1_dn", "copy_n1_antisym")


class ConstructionError(ValueError):
    """A source eigenfunction does not satisfy the hypothesis of a construction."""


_ADJ: dict = {}


def _adjacency(g: MultiGraph) -> dict:
    key = id(g)
    hit = _ADJ.get(key)
    if hit is None or hit[0] is not g:
        hit = (g, {v: dict(nb) for v, nb in g.adjacency().items()})
        _ADJ[key] = hit
    return hit[1]


@dataclass(frozen=True)
class EigenFunction:
    """A function on ``graph`` (sparse: absent vertices are 0) claimed to satisfy
    ``L f = lam f`` on ``equation_vertices``."""

    graph: MultiGraph
    values: dict
    eigenvalue: object
    boundary_condition: str = "dirichlet"
    mode: str = "source"
    equation_vertices: frozenset = field(default=None, compare=False)

    def __post_init__(self):
        if self.equation_vertices is None:
            eq = frozenset(v for v in self.graph.vertices if not v.is_boundary)
            object.__setattr__(self, "equation_vertices", eq)

    @property
    def level(self) -> int | None:
        return self.graph.level

    @property
    def exact(self) -> bool:
        return isinstance(self.eigenvalue, type(mpq(0))) and all(
            isinstance(x, type(mpq(0))) for x in self.values.values()
        )

    @property
    def lam(self):
        """The eigenvalue as mpq (exact) or float."""
        e = self.eigenvalue
        if isinstance(e, IsolatingInterval):
            return float(e)
        return e

    def __call__(self, v):
        return self.values.get(v, 0)

    @property
    def support(self) -> tuple:
        return tuple(sorted(v for v, x in self.values.items() if x != 0))

    def sup_norm(self):
        return max((abs(x) for x in self.values.values()), default=0)

    def vector(self, order) -> np.ndarray:
        return np.array([float(self(v)) for v in order])

    def to_json(self) -> dict:
        e = self.eigenvalue
        if isinstance(e, IsolatingInterval):
            ev = {"lo": str(e.lo), "hi": str(e.hi)}
        elif self.exact:
            ev = str(e)
        else:
            ev = repr(float(e))
        sup = self.support
        vals = [str(self(v)) if self.exact else repr(float(self(v))) for v in sup]
        return {
            "eigenvalue": ev,
            "mode": self.mode,
            "boundary_condition": self.boundary_condition,
            "support": [str(v) for v in sup],
            "values": vals,
        }


def _make(graph, values, lam, mode, equation_vertices=None) -> EigenFunction:
    f = EigenFunction(graph, _clean(values), lam, "dirichlet", mode, equation_vertices)
    bc = "dirichlet_neumann" if is_neumann(f) else "dirichlet"
    return EigenFunction(graph, f.values, lam, bc, mode, f.equation_vertices)


def _clean(values: dict) -> dict:
    vals = dict(values)
    floats = [abs(x) for x in vals.values() if isinstance(x, float)]
    cut = 1e-14 * max(floats) if floats else 0
    return {v: x for v, x in vals.items() if (abs(x) > cut if isinstance(x, float) else x != 0)}


# --- checks -------------------------------------------------------------------------


def residual(f: EigenFunction):
    """max |(L f)(v) - lam f(v)| over the equation vertices (exact when f is exact)."""
    adj = _adjacency(f.graph)
    lam = f.lam
    touched = set()
    for v in f.values:
        touched.add(v)
        touched.update(adj[v])
    worst = mpq(0) if f.exact else 0.0
    for v in touched:
        if v not in f.equation_vertices:
            continue
        fv = f(v)
        r = -lam * fv
        for w, c in adj[v].items():
            r += c * (fv - f(w))
        worst = max(worst, abs(r))
    return worst


def satisfies_contract(f: EigenFunction) -> bool:
    """Exact mode: residual exactly 0; numeric mode: residual < 1e-9 max|f|."""
    r = residual(f)
    if f.exact:
        return r == 0
    return float(r) < NUMERIC_RTOL * float(f.sup_norm())


def _tol(f: EigenFunction):
    return 0 if f.exact else NUMERIC_RTOL * float(f.sup_norm())


def is_dirichlet(f: EigenFunction) -> bool:
    return all(abs(f(b)) <= _tol(f) for b in f.graph.boundary)


def is_neumann(f: EigenFunction) -> bool:
    """Zero edge difference on every boundary edge."""
    g = f.graph
    return all(abs(f(b) - f(v)) <= _tol(f) for b in g.boundary for v in _adjacency(g)[b])


@lru_cache(maxsize=None)
def _phi(n: int) -> tuple:
    return tuple(sorted(_reflection(n).items()))


def reflection_map(n: int) -> dict:
    """Reflection of G_n through its gluing vertex (boundary swap for n < 2)."""
    return dict(_phi(n))


def is_antisymmetric(f: EigenFunction) -> bool:
    phi = reflection_map(f.level)
    t = _tol(f)
    return all(abs(f(v) + f(phi[v])) <= t for v in f.graph.vertices)


def _require(f: EigenFunction, dn: bool | None, antisym: bool = False) -> None:
    if not is_dirichlet(f):
        raise ConstructionError("source is not Dirichlet")
    if not satisfies_contract(f):
        raise ConstructionError("source fails the eigen-equation")
    if dn is True and not is_neumann(f):
        raise ConstructionError("source is not Dirichlet-Neumann")
    if dn is False and is_neumann(f):
        raise ConstructionError("source is Neumann; a non-Neumann source is required")
    if antisym and not is_antisymmetric(f):
        raise ConstructionError("source is not antisymmetric under the reflection")


# --- eigenspaces --------------------------------------------------------------------


@lru_cache(maxsize=None)
def _dense_eigh(n: int):
    lap = laplacian(build_g(n), Mask.C)
    w, vecs = np.linalg.eigh(lap.matrix.astype(float))
    return w, vecs, lap.vertices


@lru_cache(maxsize=None)
def _exact_dirichlet_matrix(n: int):
    lap = laplacian(build_g(n), Mask.C)
    return [[int(x) for x in row] for row in lap.matrix], lap.vertices


def _q_nullspace(rows: list, ncols: int) -> list:
    """Basis of the rational null space of a matrix given as lists of mpq."""
    m = [list(map(mpq, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [mpq(0)] * ncols
        v[fc] = mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def _is_rational(lam) -> bool:
    return isinstance(lam, (int, type(mpq(0))))


def eigenspace(n: int, lam) -> list[EigenFunction]:
    """Basis of the Dirichlet eigenspace of G_n at ``lam``.

    A rational ``lam`` gives an exact basis (empty if ``lam`` is not an
    eigenvalue); a float or isolating interval gives an orthonormal numeric
    basis from the eigenvalues within ``CLUSTER_TOL`` of it.
    """
    g = build_g(n)
    if _is_rational(lam):
        lam = mpq(lam)
        mat, verts = _exact_dirichlet_matrix(n)
        rows = [[mpq(x) - (lam if i == j else 0) for j, x in enumerate(r)] for i, r in enumerate(mat)]
        basis = _q_nullspace(rows, len(verts))
        return [_make(g, dict(zip(verts, b)), lam, "source") for b in basis]
    x = float(lam)
    w, vecs, verts = _dense_eigh(n)
    idx = np.zeros(0, dtype=int)
    if len(w):
        j = int(np.searchsorted(w, x))
        near = min((i for i in (j - 1, j) if 0 <= i < len(w)), key=lambda i: abs(w[i] - x))
        if abs(w[near] - x) < CLUSTER_TOL:
            slices = _cluster_slices(n)
            starts = [a for a, _ in slices]
            idx = np.arange(*slices[bisect.bisect_right(starts, near) - 1])
    ev = lam if isinstance(lam, IsolatingInterval) else float(np.mean(w[idx])) if len(idx) else x
    return [_make(g, dict(zip(verts, vecs[:, i].tolist())), ev, "source") for i in idx]


@lru_cache(maxsize=None)
def _cluster_slices(n: int) -> tuple:
    """(start, stop) index ranges of numeric eigenvalue clusters, chained at CLUSTER_TOL."""
    w, _, _ = _dense_eigh(n)
    out = []
    for i, x in enumerate(w):
        if out and x - w[i - 1] < CLUSTER_TOL:
            out[-1][1] = i + 1
        else:
            out.append([i, i + 1])
    return tuple(tuple(ab) for ab in out)


def dirichlet_clusters(n: int) -> list[tuple[float, int]]:
    """Distinct numeric Dirichlet eigenvalues of G_n with cluster sizes."""
    w, _, _ = _dense_eigh(n)
    return [(float(np.mean(w[a:b])), b - a) for a, b in _cluster_slices(n)]


def _combine(space: list[EigenFunction], coeffs) -> dict:
    out: dict = defaultdict(int)
    for f, c in zip(space, coeffs):
        if c == 0:
            continue
        for v, x in f.values.items():
            out[v] += c * x
    return dict(out)


def _constrain(space: list[EigenFunction], functionals: list[dict], mode: str) -> list[EigenFunction]:
    """Basis of the subspace of ``space`` on which every functional vanishes."""
    if not space:
        return []
    f0 = space[0]
    m = len(space)
    if f0.exact:
        rows = [[sum((c * f(v) for v, c in fn.items()), mpq(0)) for f in space] for fn in functionals]
        rows = [r for r in rows if any(x != 0 for x in r)]
        basis = _q_nullspace(rows, m) if rows else [[mpq(int(i == j)) for j in range(m)] for i in range(m)]
    else:
        a = np.array([[sum(c * f(v) for v, c in fn.items()) for f in space] for fn in functionals]).reshape(-1, m)
        if a.size == 0:
            basis = np.eye(m)
        else:
            # space is orthonormal, so a unit kernel direction has sup norm >= 1/sqrt(N);
            # this cut keeps exactly the directions that pass the contract tolerance checks
            _, s, vt = np.linalg.svd(a)
            cut = NUMERIC_RTOL / np.sqrt(len(f0.graph.vertices))
            rank = int(np.sum(s > cut))
            basis = vt[rank:].T
        basis = [basis[:, j].tolist() for j in range(basis.shape[1])]
    g = f0.graph
    return [_make(g, _combine(space, b), f0.eigenvalue, mode, f0.equation_vertices) for b in basis]


def _boundary_neighbour_functionals(g: MultiGraph) -> list[dict]:
    adj = _adjacency(g)
    return [{v: 1} for b in g.boundary for v in adj[b]]


def dn_eigenfunctions(n: int, lam) -> list[EigenFunction]:
    """Basis of the Dirichlet-Neumann eigenfunctions of G_n at ``lam``."""
    space = eigenspace(n, lam)
    return _constrain(space, _boundary_neighbour_functionals(build_g(n)), "source")


def _antisym_space(n: int, lam) -> list[EigenFunction]:
    phi = reflection_map(n)
    fns = []
    seen = set()
    for v, w in phi.items():
        key = tuple(sorted((v, w)))
        if key in seen:
            continue
        seen.add(key)
        fns.append({v: 2} if v == w else {v: 1, w: 1})
    return _constrain(eigenspace(n, lam), fns, "source")


def non_neumann(n: int, lam) -> EigenFunction | None:
    """A Dirichlet eigenfunction of G_n at ``lam`` that is not Neumann (None if none exists)."""
    return _pick_non_neumann(eigenspace(n, lam))


def antisym_non_neumann(n: int, lam) -> EigenFunction | None:
    """A reflection-antisymmetric Dirichlet eigenfunction of G_n at ``lam`` that is not Neumann."""
    return _pick_non_neumann(_antisym_space(n, lam))


def _pick_non_neumann(space: list[EigenFunction]) -> EigenFunction | None:
    if not space:
        return None
    g = space[0].graph
    fns = _boundary_neighbour_functionals(g)
    vals = [[sum(c * f(v) for v, c in fn.items()) for f in space] for fn in fns]
    if space[0].exact:
        for j, f in enumerate(space):
            if any(row[j] != 0 for row in vals):
                return f
        return None
    a = np.array(vals, dtype=float)
    if np.linalg.norm(a) < 1e-9:
        return None
    # the unit combination orthogonal to the Neumann subspace
    u, s, vt = np.linalg.svd(a)
    coeffs = vt[0]
    f0 = space[0]
    return _make(g, _combine(space, coeffs.tolist()), f0.eigenvalue, "source", f0.equation_vertices)


# --- constructions ------------------------------------------------------------------


def _transport(f: EigenFunction, mapping: dict, target: MultiGraph, mode: str, sign=1) -> dict:
    out: dict = defaultdict(int)
    for v, x in f.values.items():
        out[mapping[v]] += sign * x
    return dict(out)


def dn_construct(source: EigenFunction, mode: str) -> EigenFunction:
    """Dirichlet-Neumann eigenfunction on G_n built from ``source`` on G_{n-2} or G_{n-1}.

    The source hypothesis of the mode is checked and violations raise
    :class:`ConstructionError`.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    m = source.level
    if mode.startswith("copy_n2"):
        _require(source, dn=True)
        n = m + 2
        _, left, right = embedding_maps(n)
        mapping = left if mode.endswith("left") else right
    else:
        n = m + 1
        if mode == "copy_n1_dn":
            _require(source, dn=True)
        else:
            _require(source, dn=False, antisym=True)
        mapping, _, _ = embedding_maps(n)
    g = build_g(n)
    out = _make(g, _transport(source, mapping, g, mode), source.eigenvalue, mode)
    return out


def antisymmetrize(source: EigenFunction) -> EigenFunction:
    """Dirichlet, non-Neumann, antisymmetric eigenfunction on G_{m+2} from one on G_m."""
    _require(source, dn=False)
    n = source.level + 2
    _, left, _ = embedding_maps(n)
    g = build_g(n)
    phi = reflection_map(n)
    base = _transport(source, left, g, "antisymmetrize")
    out: dict = defaultdict(int, base)
    for v, x in base.items():
        out[phi[v]] -= x
    return _make(g, dict(out), source.eigenvalue, "antisymmetrize")


def span_rank(fns: list[EigenFunction], tol: float = 1e-8) -> int:
    """Rank of a list of functions on a common graph."""
    if not fns:
        return 0
    order = sorted({v for f in fns for v in f.values})
    if all(f.exact for f in fns):
        idx = {v: i for i, v in enumerate(order)}
        rows = []
        for f in fns:
            r = [mpq(0)] * len(order)
            for v, x in f.values.items():
                r[idx[v]] = x
            rows.append(r)
        # the rank of the rows equals the number of columns minus the null space of the transpose
        cols = [list(c) for c in zip(*rows)]
        return len(fns) - len(_q_nullspace(cols, len(fns)))
    a = np.array([f.vector(order) for f in fns])
    return int(np.linalg.matrix_rank(a, tol=tol * max(1.0, np.abs(a).max())))


# --- multiplicities -----------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicityReport:
    level: int
    rows: tuple  # (interval, gamma level k, expected multiplicity, numeric count)
    unassigned: int
    max_deviation: float
    total: int

    @property
    def ok(self) -> bool:
        return self.unassigned == 0 and all(e == c for _, _, e, c in self.rows)


def multiplicity_crosscheck(n: int, iso: SpectrumIsolation | None = None, tol: float = 1e-8) -> MultiplicityReport:
    """Cluster the numeric Dirichlet spectrum of G_n on the exact isolating intervals.

    Each numeric eigenvalue is assigned to the nearest interval, provided it
    lies within ``tol`` of it; cluster sizes are compared with S_{n-k} (1 for roots of gamma_n).
    """
    if not 1 <= n <= 9:
        raise ValueError("the dense cross-check is intended for 1 <= n <= 9")
    iso = iso if iso is not None else SpectrumIsolation()
    w, _, _ = _dense_eigh(n)
    spec = iso.dirichlet_spectrum(n)
    counts = [0] * len(spec)
    unassigned = 0
    dev = 0.0
    los = np.array([float(iv.lo) for iv, _, _ in spec])
    his = np.array([float(iv.hi) for iv, _, _ in spec])
    for x in w:
        # nearest interval: roots of different levels can sit closer than tol
        dist = np.maximum(np.maximum(los - x, x - his), 0.0)
        i = int(np.argmin(dist))
        if dist[i] > tol:
            unassigned += 1
            continue
        counts[i] += 1
        dev = max(dev, abs(x - float(spec[i][0])))
    rows = tuple((iv, k, (1 if k == n else multiplicity_S(n - k)), c) for (iv, k, _), c in zip(spec, counts))
    return MultiplicityReport(n, rows, unassigned, dev, len(w))


# --- blowup patches -----------------------------------------------------------------

INCREMENT_SIZE = {"1": 1, "2a": 2, "2b": 2}


def parse_increments(text) -> tuple:
    """``"1,2a,1,2b"`` (or a sequence) -> ('1', '2a', '1', '2b')."""
    items = [s.strip() for s in text.split(",")] if isinstance(text, str) else [str(s) for s in text]
    items = [s for s in items if s]
    for s in items:
        if s not in INCREMENT_SIZE:
            raise ValueError(f"unknown increment {s!r}; use 1, 2a or 2b")
    return tuple(items)


def _iota(k: int, inc: str) -> dict:
    """Embedding of G_k into G_{k + size(inc)}."""
    if inc == "1":
        deco, _, _ = embedding_maps(k + 1)
        return deco
    _, left, right = embedding_maps(k + 2)
    return left if inc == "2a" else right


def chain_map(start: int, incs) -> dict:
    """Composite address map G_start -> G_{start + total increment}."""
    incs = parse_increments(incs)
    mp = {v: v for v in build_g(start).vertices}
    k = start
    for inc in incs:
        step = _iota(k, inc)
        mp = {v: step[w] for v, w in mp.items()}
        k += INCREMENT_SIZE[inc]
    return mp


def _ball(g: MultiGraph, centre, radius: int) -> dict:
    adj = _adjacency(g)
    dist = {centre: 0}
    todo = deque([centre])
    while todo:
        v = todo.popleft()
        if dist[v] == radius:
            continue
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                todo.append(w)
    return dist


def _induced(g: MultiGraph, keep: set) -> MultiGraph:
    edges = {(a, b, lab): m for (a, b, lab), m in g.edges.items() if a in keep and b in keep}
    loops = {(v, lab): m for (v, lab), m in g.loops.items() if v in keep}
    bnd = tuple(b for b in g.boundary if b in keep)
    return MultiGraph(tuple(keep), edges, loops, bnd, g.level, "patch")


@dataclass(frozen=True)
class BlowupPatch:
    """Finite piece of a blowup: G_{k_N} with the images of the nested G_{k_n}.

    ``maps[i]`` sends vertices of G_{levels[i]} to vertices of G_{k_N}
    (possibly outside the patch when a radius is set).  ``interior`` holds the
    patch vertices whose whole neighbourhood in the blowup is in the patch.
    """

    increments: tuple
    levels: tuple
    graph: MultiGraph
    interior: frozenset
    maps: tuple
    centre: Address
    radius: int | None

    @property
    def depth(self) -> int:
        return self.levels[-1]

    @property
    def generic(self) -> bool:
        """Both increment sizes occur."""
        sizes = {INCREMENT_SIZE[s] for s in self.increments}
        return sizes == {1, 2}

    def image(self, i: int) -> set:
        return set(self.maps[i].values())

    def laplacian_row(self, v) -> dict:
        adj = _adjacency(self.graph)
        row = {w: -c for w, c in adj[v].items()}
        row[v] = sum(adj[v].values())
        return row


def build_patch(increments, radius: int | None = None) -> BlowupPatch:
    """Patch for an increment sequence, starting at G_2.

    With ``radius`` the patch is the ball of that radius around the image of
    the gluing vertex of G_2; otherwise it is all of G_{k_N}.
    """
    incs = parse_increments(increments)
    if not incs:
        raise ValueError("need at least one increment")
    levels = [2]
    for s in incs:
        levels.append(levels[-1] + INCREMENT_SIZE[s])
    top = build_g(levels[-1])
    maps = [chain_map(k, incs[i:]) for i, k in enumerate(levels)]
    centre = maps[0][Address("01")]
    if radius is None:
        graph = top
        interior = frozenset(v for v in top.vertices if not v.is_boundary)
    else:
        dist = _ball(top, centre, radius)
        graph = _induced(top, set(dist))
        interior = frozenset(v for v, d in dist.items() if d < radius and not v.is_boundary)
    return BlowupPatch(incs, tuple(levels), graph, interior, tuple(maps), centre, radius)


def _to_patch(f: EigenFunction, mapping: dict, patch: BlowupPatch, mode: str) -> EigenFunction:
    verts = patch.graph.index
    out: dict = defaultdict(int)
    for v, x in f.values.items():
        w = mapping[v]
        if w not in verts:
            raise ConstructionError("the patch does not contain the support of the eigenfunction")
        out[w] += x
    for v in out:
        if v not in patch.interior:
            raise ConstructionError("the support reaches the edge of the patch")
    vals = _clean(out)
    return EigenFunction(patch.graph, vals, f.eigenvalue, "dirichlet_neumann", mode, patch.interior)


def extend_by_zero(f: EigenFunction, patch: BlowupPatch, index: int | None = None) -> EigenFunction:
    """Transplant a Dirichlet-Neumann eigenfunction of G_{k_n} to the patch, zero elsewhere."""
    _require(f, dn=True)
    if index is None:
        if f.level not in patch.levels:
            raise ConstructionError(f"G_{f.level} is not in the embedding chain {patch.levels}")
        index = patch.levels.index(f.level)
    if patch.levels[index] != f.level:
        raise ConstructionError("index does not match the level of the eigenfunction")
    return _to_patch(f, patch.maps[index], patch, "extend_by_zero")


def place(f: EigenFunction, patch: BlowupPatch, path) -> EigenFunction:
    """Like :func:`extend_by_zero` but through an arbitrary increment path to the top level."""
    _require(f, dn=True)
    path = parse_increments(path)
    if f.level + sum(INCREMENT_SIZE[s] for s in path) != patch.depth:
        raise ValueError("path does not end at the patch depth")
    return _to_patch(f, chain_map(f.level, path), patch, "place")


def antisym_member_check(F: EigenFunction, patch: BlowupPatch) -> bool:
    """Membership in the finitely supported antisymmetric class on this patch.

    True when for some n with increment ``1`` from k_{n-1} to k_n, F is
    supported on the image of G_{k_{n-1}} and its pull-back g to G_{k_n}
    satisfies g = -g o reflection.
    """
    sup = set(F.support)
    tol = 0 if F.exact else NUMERIC_RTOL * float(F.sup_norm())
    for i in range(1, len(patch.levels)):
        if patch.increments[i - 1] != "1":
            continue
        if not sup <= patch.image(i - 1):
            continue
        mp = patch.maps[i]
        phi = reflection_map(patch.levels[i])
        if all(abs(F(mp[v]) + F(mp[phi[v]])) <= tol for v in mp):
            return True
    return False


def localized_span_ratio(patch: BlowupPatch, ball_radius: int) -> mpq:
    """dim span of extend-by-zero Dirichlet-Neumann eigenfunctions inside a ball / ball size."""
    dim, size = localized_span(patch, ball_radius)
    return mpq(dim, size)


def localized_span(patch: BlowupPatch, ball_radius: int) -> tuple[int, int]:
    """(dim span, ball size) for extend-by-zero Dirichlet-Neumann eigenfunctions inside a ball.

    The eigenfunctions are those of the nested copies of G_{k_n}, restricted
    to vanish outside the ball of ``ball_radius`` around the patch centre.
    The dimension is nondecreasing in the radius; the ratio need not be.
    """
    ball = set(_ball(patch.graph, patch.centre, ball_radius))
    order = sorted(ball)
    pos = {v: i for i, v in enumerate(order)}
    vecs = []
    for i, k in enumerate(patch.levels):
        mp = patch.maps[i]
        _, vv, verts = _dense_eigh(k)
        outside = [j for j, v in enumerate(verts) if mp[v] not in pos]
        adj = _adjacency(build_g(k))
        nb = [verts.index(v) for b in build_g(k).boundary for v in adj[b] if not v.is_boundary]
        cons = sorted(set(outside) | set(nb))
        src = [r for r, v in enumerate(verts) if mp[v] in pos]
        tgt = [pos[mp[verts[r]]] for r in src]
        for a0, b0 in _cluster_slices(k):
            basis = vv[:, a0:b0]
            if cons:
                a = basis[cons, :]
                _, s, vt = np.linalg.svd(a)
                rank = int(np.sum(s > 1e-9))
                basis = basis @ vt[rank:].T
            for j in range(basis.shape[1]):
                col = np.zeros(len(order))
                np.add.at(col, tgt, basis[src, j])
                vecs.append(col)
    if not vecs:
        return 0, len(order)
    rank = int(np.linalg.matrix_rank(np.array(vecs), tol=1e-8))
    return rank, len(order)
