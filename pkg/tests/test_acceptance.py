"""Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

Run with ``pytest tests/test_acceptance.py -s`` (the lines are printed even
without ``-s``).  The full run takes roughly 20 minutes, dominated by the
Sturm sequence of gamma_12, the level-14 pipeline and the depth-12 patch.
"""

import time

import mpmath
import pytest
from gmpy2 import mpq

from basilica.exact.charpoly import charpoly
from basilica.exact.modular import coprime, is_squarefree
from basilica.exact.poly import LAMBDA, ONE, IntPoly
from basilica.graphs import build_g, laplacian, vertex_count_formula
from basilica.measure import (
    limit_proportion,
    mass_on_levels,
    spectral_measure,
    tail_sum,
    tail_sum_direct,
    total_mass,
    weight_bound_holds,
)
from basilica.recursion import (
    SpectralSequence,
    cubic_roots,
    degree_eta,
    degree_gamma,
    degree_gamma_closed,
    initial_triples,
    multiplicity_S,
    multiplicity_S_table,
    three_term_residual,
)
from basilica.spectrum import SpectrumIsolation, sturm_root_count

# pinned tolerances and limits
ORACLE_MAX_N = 8
ORACLE_SECONDS = 120
VERTEX_MAX_N = 12
DEGREE_C_MAX_N = 14
FACTOR_MAX_N = 12
S_MAX_M = 60
IDENTITY_MAX_N = 10
CLOSED_FORM_MAX_N = 30
CLOSED_FORM_ROUNDING = mpmath.mpf("1e-6")
ETA_MAX_N = 14
STURM_MAX_N = 12
NUMERIC_MAX_N = 9
NUMERIC_DEVIATION = 1e-8
MEASURE_MAX_N = 14
PROPORTION_RANGE = (0.74, 0.78)
MASS_FLOOR = mpq(39, 100)
MASS_LEVELS = range(14, 41)
TAIL_MAX_M, TAIL_MAX_N = 10, 20
TAIL_RTOL = mpmath.mpf("1e-10")
GAP_MAX_LEVEL = 14
GAP_MIN_WIDTH = mpq(1, 10**6)
GAP_SIDE_MAX_N = 6
GAP_SIDE_STEPS = 4
CONSTRUCTION_MAX_N = 9
PATCHES = ("2a,1,2b,1,2a,1,1", "1,2a,2b,1,2a,2b", "2b,2b,1,1,1,2a")
MAX_PATCH_DEPTH = 12
PIPELINE_SECONDS = 600

L = LAMBDA


def _p(*high_first):
    return IntPoly(list(reversed(high_first)))


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def pipeline():
    """Cold run of the level-14 pipeline with a fresh, uncached sequence."""
    from basilica.gaps import gap_enumerate

    times = {}
    t0 = time.perf_counter()
    seq = SpectralSequence()
    seq.c(14)
    times["c_14"] = time.perf_counter() - t0
    t = time.perf_counter()
    facs = {n: seq.factorization(n) for n in range(1, 15)}
    times["factorization"] = time.perf_counter() - t
    t = time.perf_counter()
    iso = SpectrumIsolation(seq)
    roots = iso.all_roots(GAP_MAX_LEVEL)
    times["isolation"] = time.perf_counter() - t
    t = time.perf_counter()
    atoms = spectral_measure(14, iso)
    times["measure"] = time.perf_counter() - t
    t = time.perf_counter()
    gaps = gap_enumerate(GAP_MAX_LEVEL, GAP_MIN_WIDTH, iso=iso)
    times["gaps"] = time.perf_counter() - t
    times["total"] = time.perf_counter() - t0
    return {"seq": seq, "iso": iso, "facs": facs, "roots": roots, "atoms": atoms, "gaps": gaps, "times": times}


def test_criterion_01_initial_literals(report):
    b0, c1, b1 = L - 1, L - 2, _p(1, -3, 1)
    c2 = _p(1, -6, 4)
    printed = [
        (L * (L - 2), L - 1, ONE),
        (L * (L - 1) * (L - 3), b1, c1),
        (L * _p(1, -8, 15, -8), _p(1, -7, 9, -2), c2),
        (L * (L - 2) * b1 * _p(1, -11, 31, -14), _p(1, -15, 79, -182, 181, -62, 4), (L - 2) * _p(1, -12, 42, -44, 8)),
    ]
    # the unexpanded forms, with d_1 read as the graph B_0
    unexpanded = {
        "a2": (L - 4) * b0 * b0 * c1 - 2 * b0 * c1 - 4 * b0 * b0,
        "b2": (L - 4) * b0 * c1 - c1 - 4 * b0,
        "c2": (L - 4) * c1 - 4,
        "a3": (L - 4) * b1 * b1 * c2 - 2 * b1 * c2 * b0 - 4 * b1 * b1 * c1,
        "b3": (L - 4) * b1 * c1 * c2 - b1 * c2 - b0 * c1 * c2 - 4 * b1 * c1 * c1,
        "c3": (L - 4) * c1 * c1 * c2 - 2 * c1 * c2 - 4 * c1**3,
    }
    bad = []
    for t, (a, b, c) in zip(initial_triples(), printed):
        for name, got, want in (("a", t.a, a), ("b", t.b, b), ("c", t.c, c)):
            if got.coeffs != want.coeffs:
                bad.append(f"{name}{t.n}")
    for key, poly in unexpanded.items():
        t = initial_triples()[int(key[1])]
        if getattr(t, key[0]).coeffs != poly.coeffs:
            bad.append(f"unexpanded {key}")
    report(1, not bad, "a_n, b_n, c_n for n = 0..3 match coefficient-for-coefficient" if not bad else f"mismatch {bad}")


def test_criterion_02_oracle_equivalence(report):
    t0 = time.perf_counter()
    bad = []
    seqs = [SpectralSequence("c_only"), SpectralSequence("abc")]
    for n in range(0, ORACLE_MAX_N + 1):
        g = build_g(n)
        det = {m: charpoly(laplacian(g, m).matrix) for m in ("A", "B", "C")}
        if n >= 1:
            det["D"] = charpoly(laplacian(g, "D").matrix)
            det["E"] = charpoly(laplacian(g, "E").matrix)
        for s in seqs:
            want = {"A": s.a(n), "B": s.b(n), "C": s.c(n)}
            if n >= 1:
                want["D"] = (L - 1) * s.c(n) - s.b(n)
                want["E"] = (L - 1) * s.b(n) - s.a(n)
            bad += [f"{s.route}:{m}{n}" for m in det if det[m] != want[m]]
    dt = time.perf_counter() - t0
    ok = not bad and dt < ORACLE_SECONDS
    report(2, ok, f"masks A-E, both routes, n <= {ORACLE_MAX_N}, {dt:.1f} s" if ok else f"{bad}, {dt:.1f} s")


def test_criterion_03_vertex_counts(report, pipeline):
    seq = pipeline["seq"]
    bad = [n for n in range(0, VERTEX_MAX_N + 1) if len(build_g(n)) != vertex_count_formula(n)]
    bad += [f"deg c_{n}" for n in range(0, DEGREE_C_MAX_N + 1) if seq.c(n).degree != vertex_count_formula(n) - 2]
    report(3, not bad, f"|V(G_n)| for n <= {VERTEX_MAX_N}, deg c_n for n <= {DEGREE_C_MAX_N}" if not bad else str(bad))


def test_criterion_04_factorization(report, pipeline):
    seq = pipeline["seq"]
    bad = []
    for n in range(1, FACTOR_MAX_N + 1):
        prod = seq.gamma(n)
        for k in range(1, n):
            prod = prod * seq.gamma(k) ** multiplicity_S(n - k)
        if prod != seq.c(n) or pipeline["facs"][n].product() != seq.c(n):
            bad.append(f"c_{n}")
    gs = [seq.gamma(k) for k in range(1, FACTOR_MAX_N + 1)]
    bad += [f"squarefree {i + 1}" for i, p in enumerate(gs) if not is_squarefree(p)]
    bad += [f"coprime {i + 1},{j + 1}" for i in range(len(gs)) for j in range(i) if not coprime(gs[i], gs[j])]
    if multiplicity_S_table(S_MAX_M) != [multiplicity_S(m) for m in range(S_MAX_M + 1)]:
        bad.append("S closed form vs recursion")
    report(
        4,
        not bad,
        f"c_n factors for n <= {FACTOR_MAX_N}; gamma_k pairwise coprime, squarefree; S_m for m <= {S_MAX_M}"
        if not bad
        else str(bad),
    )


def test_criterion_05_identities(report, pipeline):
    seq = pipeline["seq"]
    bad = []
    for n in range(0, IDENTITY_MAX_N + 1):
        if seq.a(n) * seq.c(n) != seq.b(n).square() - seq.g(n).square():
            bad.append(f"ac-b^2+g^2 at {n}")
        if n >= 2 and not three_term_residual(seq.triple(n), seq.triple(n - 2)).is_zero():
            bad.append(f"three-term at {n}")
        if n >= 4 and not seq.gamma_identity_check(n):
            bad.append(f"gamma/eta at {n}")
    report(5, not bad, f"all three identities exact for n <= {IDENTITY_MAX_N}" if not bad else str(bad))


def test_criterion_06_degrees(report, pipeline):
    seq = pipeline["seq"]
    bad, worst = [], mpmath.mpf(0)
    for n in range(1, CLOSED_FORM_MAX_N + 1):
        x = degree_gamma_closed(n)
        err = abs(x - degree_gamma(n))
        worst = max(worst, err)
        if err > CLOSED_FORM_ROUNDING:
            bad.append(f"closed form {n}")
    for n in range(1, ETA_MAX_N + 1):
        if seq.eta(n).degree != degree_eta(n) or seq.gamma(n).degree != degree_gamma(n):
            bad.append(f"eta_{n}")
    report(
        6,
        not bad,
        f"closed form within {mpmath.nstr(worst, 3)} for n <= {CLOSED_FORM_MAX_N}; deg eta_n for n <= {ETA_MAX_N}"
        if not bad
        else str(bad),
    )


@pytest.mark.slow
def test_criterion_07_sturm_real_roots(report, pipeline):
    seq = pipeline["seq"]
    t0 = time.perf_counter()
    counts = {n: sturm_root_count(seq.gamma(n)) for n in range(1, STURM_MAX_N + 1)}
    dt = time.perf_counter() - t0
    bad = [n for n, c in counts.items() if c != degree_gamma(n)]
    report(
        7,
        not bad,
        f"Sturm counts equal deg gamma_n on (0, 8] for n <= {STURM_MAX_N} ({counts[STURM_MAX_N]} roots at n = {STURM_MAX_N}, {dt:.0f} s)"
        if not bad
        else f"levels {bad}",
    )


def test_criterion_08_numeric_reconciliation(report, pipeline):
    from basilica.eigenmodes import multiplicity_crosscheck

    worst, bad = 0.0, []
    for n in range(1, NUMERIC_MAX_N + 1):
        rep = multiplicity_crosscheck(n, pipeline["iso"], tol=NUMERIC_DEVIATION)
        worst = max(worst, rep.max_deviation)
        if not rep.ok or rep.unassigned:
            bad.append(n)
    ok = not bad and worst < NUMERIC_DEVIATION
    report(8, ok, f"multiplicities S_(n-k) for n <= {NUMERIC_MAX_N}, max deviation {worst:.2e}" if ok else f"levels {bad}, {worst:.2e}")


def test_criterion_09_measure(report, pipeline):
    bad = []
    if total_mass(pipeline["atoms"]) != 1:
        bad.append("chi_14 mass")
    bad += [f"bound {n},{k}" for n in range(1, MEASURE_MAX_N + 1) for k in range(1, n + 1) if not weight_bound_holds(n, k)]
    prop = limit_proportion(14)
    if not PROPORTION_RANGE[0] <= prop <= PROPORTION_RANGE[1]:
        bad.append(f"limit proportion {prop}")
    low = min(mass_on_levels(n, 14) for n in MASS_LEVELS)
    if low < MASS_FLOOR:
        bad.append(f"mass {low}")
    worst = mpmath.mpf(0)
    for rho in cubic_roots()[0]:
        for m in range(0, TAIL_MAX_M + 1):
            for n in range(m + 1, TAIL_MAX_N + 1):
                want = tail_sum_direct(m, n, rho)
                worst = max(worst, abs(tail_sum(m, n, rho) - want) / abs(want))
    if worst > TAIL_RTOL:
        bad.append(f"tail sum {worst}")
    report(
        9,
        not bad,
        f"bound for k <= n <= {MEASURE_MAX_N}; limit proportion {float(prop):.4f}; "
        f"min mass {float(low):.4f} over n = {MASS_LEVELS.start}..{MASS_LEVELS.stop - 1}; tail rel. err {mpmath.nstr(worst, 3)}"
        if not bad
        else str(bad),
    )


@pytest.mark.slow
def test_criterion_10_gaps(report, pipeline):
    from basilica.gaps import gap_side

    gaps, roots, iso = pipeline["gaps"], pipeline["roots"], pipeline["iso"]
    bad = []
    if not gaps:
        bad.append("no gaps")
    # exact cross-check: merge-walk of two sorted lists of rational intervals
    ivs = [iv for iv, _ in roots]
    j = 0
    for g in gaps:
        while j < len(ivs) and ivs[j].hi <= g.lo:
            j += 1
        if j < len(ivs) and ivs[j].lo < g.hi:
            bad.append(f"gap ({float(g.lo)}, {float(g.hi)}) meets a root interval")
    sides = 0
    for n in range(1, GAP_SIDE_MAX_N + 1):
        for iv in iso.level(n).roots:
            s = gap_side(n, iv, iso, evidence_steps=GAP_SIDE_STEPS)
            sides += 1
            ok = (
                s.gap in ("left", "right")
                and s.certificate is not None
                and s.certificate.ok
                and s.distances_decreasing
                and 0 < len(s.evidence) <= GAP_SIDE_STEPS
            )
            if not ok:
                bad.append(f"gap side at level {n} root {float(iv):.6f}")
    report(
        10,
        not bad,
        f"{len(gaps)} certified gaps, none meets the {len(ivs)} root intervals; one-sided gaps at all {sides} roots of levels <= {GAP_SIDE_MAX_N}"
        if not bad
        else str(bad[:5]),
    )


@pytest.mark.slow
def test_criterion_11_eigenfunctions(report):
    import basilica.eigenmodes as em

    checked, bad = 0, []

    def check(f, label):
        nonlocal checked
        checked += 1
        if not em.satisfies_contract(f):
            bad.append(label)

    # every construction at every Dirichlet eigenvalue of the source level
    for n in range(2, CONSTRUCTION_MAX_N + 1):
        if n >= 3:
            for lam, _ in em.dirichlet_clusters(n - 2):
                for f in em.dn_eigenfunctions(n - 2, lam):
                    check(em.dn_construct(f, "copy_n2_left"), f"left {n}")
                    check(em.dn_construct(f, "copy_n2_right"), f"right {n}")
                h = em.non_neumann(n - 2, lam)
                if h is not None:
                    check(em.antisymmetrize(h), f"antisym {n}")
        for lam, _ in em.dirichlet_clusters(n - 1):
            for f in em.dn_eigenfunctions(n - 1, lam):
                check(em.dn_construct(f, "copy_n1_dn"), f"n1 dn {n}")
            h = em.antisym_non_neumann(n - 1, lam)
            if h is not None:
                check(em.dn_construct(h, "copy_n1_antisym"), f"n1 antisym {n}")
    constructions = checked
    # exact chain at eigenvalue 2
    d4 = em.dn_construct(em.antisymmetrize(em.eigenspace(1, 2)[0]), "copy_n1_antisym")
    if not (d4.exact and em.residual(d4) == 0):
        bad.append("exact chain")
    # every Dirichlet-Neumann eigenfunction of every chain level, extended by zero
    for incs in PATCHES:
        patch = em.build_patch(incs)
        if patch.depth > MAX_PATCH_DEPTH:
            bad.append(f"depth {incs}")
        for i, k in enumerate(patch.levels):
            for lam, _ in em.dirichlet_clusters(k):
                for f in em.dn_eigenfunctions(k, lam):
                    check(em.extend_by_zero(f, patch, i), f"extend {incs} level {k}")
        F = em.extend_by_zero(d4, patch) if 4 in patch.levels else None
        if F is not None:
            check(F, f"exact extend {incs}")
            if em.residual(F) != 0:
                bad.append(f"exact residual {incs}")
    report(
        11,
        not bad,
        f"{constructions} constructions (n <= {CONSTRUCTION_MAX_N}) and {checked - constructions} extensions "
        f"on {len(PATCHES)} patches of depth <= {MAX_PATCH_DEPTH} meet the residual contract"
        if not bad
        else str(bad[:5]),
    )


@pytest.mark.slow
def test_criterion_12_pipeline_time(report, pipeline):
    t = pipeline["times"]
    ok = t["total"] < PIPELINE_SECONDS and len(pipeline["gaps"]) >= 1 and total_mass(pipeline["atoms"]) == 1
    stages = ", ".join(f"{k} {v:.0f} s" for k, v in t.items() if k != "total")
    report(12, ok, f"cold pipeline through n = 14 in {t['total']:.0f} s ({stages}), limit {PIPELINE_SECONDS} s")
