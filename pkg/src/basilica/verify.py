"""The identity and oracle suite behind ``basilica verify``.

Each check returns ``(name, passed, detail)``; nothing here raises on a
failed identity.
"""

from __future__ import annotations

from .exact.charpoly import charpoly
from .exact.poly import LAMBDA
from .graphs import Mask, build_g, laplacian, vertex_count_formula
from .measure import weight_bound_holds
from .recursion import (
    SpectralSequence,
    degree_eta,
    degree_gamma,
    degree_gamma_closed,
    multiplicity_S,
    multiplicity_S_table,
    three_term_residual,
)
from .spectrum import sturm_root_count

__all__ = ["run_suite"]

ORACLE_MAX = 8
STURM_MAX = 11


def _oracle(seq: SpectralSequence, top: int):
    bad = []
    for n in range(0, min(top, ORACLE_MAX) + 1):
        g = build_g(n)
        a, b, c = seq.a(n), seq.b(n), seq.c(n)
        want = {"A": a, "B": b, "C": c}
        if n >= 1:
            want["D"] = (LAMBDA - 1) * c - b
            want["E"] = (LAMBDA - 1) * b - a
        for mask, p in want.items():
            if charpoly(laplacian(g, Mask(mask)).matrix) != p:
                bad.append(f"{mask}{n}")
    return not bad, "mismatch: " + ",".join(bad) if bad else f"masks A-E, n <= {min(top, ORACLE_MAX)}"


def _routes(seq: SpectralSequence, top: int):
    other = SpectralSequence("abc" if seq.route == "c_only" else "c_only")
    bad = [n for n in range(0, top + 1) if other.c(n) != seq.c(n)]
    return not bad, f"c_n differs at {bad}" if bad else f"n <= {top}"


def _vertices(top: int):
    bad = [n for n in range(0, min(top, 12) + 1) if len(build_g(n)) != vertex_count_formula(n)]
    return not bad, f"bad levels {bad}" if bad else f"n <= {min(top, 12)}"


def _factorization(seq: SpectralSequence, top: int):
    bad = []
    for n in range(1, top + 1):
        if seq.factorization(n).product() != seq.c(n):
            bad.append(n)
            continue
        try:
            seq.check_gamma(n)
        except AssertionError:
            bad.append(n)
    return not bad, f"bad levels {bad}" if bad else f"n <= {top}"


def _identities(seq: SpectralSequence, top: int):
    bad = []
    for n in range(0, top + 1):
        a, b, c, g = seq.a(n), seq.b(n), seq.c(n), seq.g(n)
        if a * c != b.square() - g.square():
            bad.append(f"acbg{n}")
        if n >= 2 and not three_term_residual(seq.triple(n), seq.triple(n - 2)).is_zero():
            bad.append(f"three-term{n}")
        if n >= 4 and not seq.gamma_identity_check(n):
            bad.append(f"gamma-eta{n}")
        if n >= 1 and not seq.zeta_identity(n):
            bad.append(f"zeta{n}")
    return not bad, ",".join(bad) if bad else f"n <= {top}"


def _degrees(seq: SpectralSequence, top: int):
    bad = []
    for n in range(1, 31):
        x = degree_gamma_closed(n)
        if abs(x - round(x)) > 1e-6 or int(round(x)) != degree_gamma(n):
            bad.append(f"closed{n}")
    for n in range(1, top + 1):
        if seq.gamma(n).degree != degree_gamma(n) or seq.eta(n).degree != degree_eta(n):
            bad.append(f"constructed{n}")
        if seq.c(n).degree != vertex_count_formula(n) - 2:
            bad.append(f"c{n}")
    return not bad, ",".join(bad) if bad else f"closed form n <= 30, constructed n <= {top}"


def _multiplicities():
    table = multiplicity_S_table(60)
    ok = table == [multiplicity_S(m) for m in range(61)]
    return ok, "closed form equals recursion for m <= 60" if ok else "S mismatch"


def _sturm(seq: SpectralSequence, top: int):
    top = min(top, STURM_MAX)
    bad = [n for n in range(1, top + 1) if sturm_root_count(seq.gamma(n)) != degree_gamma(n)]
    return not bad, f"bad levels {bad}" if bad else f"all roots real in (0, 8], n <= {top}"


def _measure(seq: SpectralSequence, top: int):
    bad = []
    for n in range(1, top + 1):
        atoms = sum(multiplicity_S(n - k) * degree_gamma(k) for k in range(1, n)) + degree_gamma(n)
        if atoms != vertex_count_formula(n) - 2:
            bad.append(f"mass{n}")
        if not all(weight_bound_holds(n, k) for k in range(1, n + 1)):
            bad.append(f"bound{n}")
    return not bad, ",".join(bad) if bad else f"n <= {top}"


def run_suite(max_level: int = 8, seq: SpectralSequence | None = None) -> list[tuple[str, bool, str]]:
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    seq = seq if seq is not None else SpectralSequence()
    checks = [
        ("determinant_oracle", lambda: _oracle(seq, max_level)),
        ("recursion_routes", lambda: _routes(seq, max_level)),
        ("vertex_counts", lambda: _vertices(max_level)),
        ("factorization", lambda: _factorization(seq, max_level)),
        ("identities", lambda: _identities(seq, max_level)),
        ("degrees", lambda: _degrees(seq, max_level)),
        ("multiplicities", _multiplicities),
        ("sturm_real_roots", lambda: _sturm(seq, max_level)),
        ("measure", lambda: _measure(seq, max_level)),
    ]
    out = []
    for name, fn in checks:
        passed, detail = fn()
        out.append((name, bool(passed), detail))
    return out
