"""Command-line front end.

Every subcommand writes into ``--out`` (default ``basilica-out``) and finishes
by writing ``MANIFEST.json``, which lists the files produced and whether the
run completed.  Exit status: 0 on success, 1 when a verification fails, 2 on
usage errors.  The polynomial cache root is ``--cache`` or the
``BASILICA_CACHE`` environment variable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from gmpy2 import mpq

from . import io, svg
from .cache import PolyCache
from .graphs import build_g, build_gamma

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _rational(text: str) -> mpq:
    try:
        return mpq(text)
    except (ValueError, ZeroDivisionError) as exc:
        try:
            return mpq(float(text))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _formats(text: str) -> tuple:
    out = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in out if s not in ("json", "csv", "dot", "svg")]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s): {', '.join(bad)}")
    return out


def _sequence(args):
    from .recursion import SpectralSequence

    return SpectralSequence(getattr(args, "route", "c_only"), PolyCache(args.cache))


def _isolation(args):
    from .spectrum import SpectrumIsolation

    return SpectrumIsolation(_sequence(args))


def _level(n: int, lo: int = 0, hi: int | None = None) -> int:
    if n < lo or (hi is not None and n > hi):
        raise UsageError(f"level must lie in [{lo}, {hi if hi is not None else 'inf'}]")
    return n


# --- subcommands --------------------------------------------------------------------


def cmd_graph(args, man: io.Manifest) -> int:
    n = _level(args.level, 0 if args.kind == "G" else 1)
    g = build_g(n) if args.kind == "G" else build_gamma(n)
    stem = f"{args.kind}_{n}"
    if "json" in args.format:
        man.write_json(stem + ".json", io.graph_json(g))
    if "dot" in args.format:
        man.write(stem + ".dot", io.graph_dot(g))
    man.checks["vertices"] = len(g)
    return EXIT_OK


def cmd_charpoly(args, man: io.Manifest) -> int:
    n = _level(args.level, 0)
    seq = _sequence(args)
    out = {}
    for kind in args.kinds:
        if kind in ("gamma", "eta") and n < 1:
            raise UsageError(f"{kind}_n needs n >= 1")
        out[kind] = io.poly_json(getattr(seq, kind)(n))
    man.write_json(f"charpoly_{n}.json", {"n": n, "route": seq.route, "polynomials": out})
    return EXIT_OK


def cmd_factor(args, man: io.Manifest) -> int:
    n = _level(args.level, 1)
    seq = _sequence(args)
    fac = seq.factorization(n)
    ok = fac.product() == seq.c(n)
    man.write_json(f"factor_{n}.json", io.factorization_json(fac))
    man.checks["product_equals_c"] = ok
    print("factors:", [(k, f"gamma_{k}", e) for k, _, e in fac.factors])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spectrum(args, man: io.Manifest) -> int:
    n = _level(args.level, 1)
    iso = _isolation(args)
    width = args.width
    spec = iso.dirichlet_spectrum(n)
    from .exact.roots import refine

    rows = []
    for iv, k, mult in spec:
        if width is not None and iv.width > width:
            iv = refine(iv, width)
        rows.append((iv, k, mult))
    if "json" in args.format:
        man.write_json(
            f"spectrum_{n}.json",
            {"n": n, "eigenvalues": [io.interval_json(iv, level=k, multiplicity=m) for iv, k, m in rows]},
        )
    if "csv" in args.format:
        lines = ["lo,hi,level_k,multiplicity"] + [f"{io.q_str(iv.lo)},{io.q_str(iv.hi)},{k},{m}" for iv, k, m in rows]
        man.write(f"spectrum_{n}.csv", "\n".join(lines) + "\n")
    if "svg" in args.format:
        levels = {k: [float(iv) for iv in iso.level(k).roots] for k in range(1, n + 1)}
        man.write(f"ladder_{n}.svg", svg.spectrum_ladder(levels, f"roots of gamma_k, k <= {n}"))
    man.checks["distinct_eigenvalues"] = len(rows)
    return EXIT_OK


def cmd_measure(args, man: io.Manifest) -> int:
    from .measure import spectral_measure, total_mass

    n = _level(args.level, 1)
    atoms = spectral_measure(n, _isolation(args))
    mass = total_mass(atoms)
    if "csv" in args.format:
        man.write(f"measure_{n}.csv", io.measure_csv(atoms))
    if "json" in args.format:
        man.write_json(
            f"measure_{n}.json",
            {
                "n": n,
                "total_mass": io.q_str(mass),
                "atoms": [io.interval_json(a.root, level=a.level, weight=io.q_str(a.weight)) for a in atoms],
            },
        )
    if "svg" in args.format:
        man.write(
            f"measure_{n}.svg",
            svg.stem_plot([float(a.root) for a in atoms], [float(a.weight) for a in atoms], f"chi_{n}"),
        )
    man.checks["total_mass_is_one"] = mass == 1
    return EXIT_OK if mass == 1 else EXIT_FAIL


def _zeta12_curve(samples: int = 4000):
    segs, cur = [], []
    for i in range(1, samples + 1):
        x = 8 * i / samples
        if abs(x - 2) < 1e-9:
            continue
        if cur and (cur[-1][2] - 2) * (x - 2) < 0:
            segs.append([(u, v) for u, v, _ in cur])
            cur = []
        cur.append((x - 2, x - 4 - 4 / (x - 2), x))
    segs.append([(u, v) for u, v, _ in cur])
    return segs


def cmd_gaps(args, man: io.Manifest) -> int:
    from .gaps import escape_samples, gap_enumerate

    n = _level(args.max_level, 1)
    iso = _isolation(args)
    gaps = gap_enumerate(n, args.min_width, iso=iso, depth_budget=args.depth_budget)
    man.write("gaps.csv", io.gaps_csv(gaps))
    if "json" in args.format:
        total = sum((g.width for g in gaps), mpq(0))
        man.write_json(
            "gaps.json",
            {"max_level": n, "count": len(gaps), "total_width": io.q_str(total), "gaps": [io.gap_json(g) for g in gaps]},
        )
    if "svg" in args.format:
        man.write("gaps.svg", svg.gap_bar([(float(g.lo), float(g.hi)) for g in gaps], title=f"certified gaps, level {n}"))
        man.write("escape.svg", svg.escape_plot(_zeta12_curve(), title="(zeta_1, zeta_2) and the escape region"))
    ok = len(gaps) >= 1
    if gaps and args.samples:
        samples = escape_samples(gaps, args.samples, seed=args.seed)
        ok = ok and all(float(z[-1]) > 1e6 for _, z in samples)
    man.checks["gaps"] = len(gaps)
    man.checks["escape_samples_ok"] = ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_blowup(args, man: io.Manifest) -> int:
    from . import eigenmodes as em

    patch = em.build_patch(args.increments, args.radius)
    if patch.depth > args.max_depth:
        raise UsageError(f"patch depth {patch.depth} exceeds --max-depth {args.max_depth}")
    report = []
    ok = True
    for i, k in enumerate(patch.levels):
        for lam, _ in em.dirichlet_clusters(k):
            for f in em.dn_eigenfunctions(k, lam):
                row = {"level": k, "eigenvalue": repr(float(lam))}
                try:
                    F = em.extend_by_zero(f, patch, i)
                except em.ConstructionError as exc:
                    # the source itself failed its contract; report it, do not skip it
                    row.update(residual=repr(float(em.residual(f))), ok=False, error=str(exc))
                else:
                    row.update(residual=repr(float(em.residual(F))), ok=em.satisfies_contract(F))
                ok = ok and row["ok"]
                report.append(row)
    ratios = {}
    for r in args.ball_radius:
        dim, size = em.localized_span(patch, r)
        ratios[str(r)] = {"dim": dim, "ball": size, "ratio": io.q_str(mpq(dim, size))}
    body = {
        "increments": list(patch.increments),
        "levels": list(patch.levels),
        "generic": patch.generic,
        "patch_vertices": len(patch.graph),
        "interior_vertices": len(patch.interior),
        "extensions": report,
        "span": ratios,
    }
    man.write_json("blowup.json", body)
    man.checks["extensions"] = len(report)
    man.checks["residuals_ok"] = ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, man: io.Manifest) -> int:
    from .verify import run_suite

    results = run_suite(args.max_level, _sequence(args))
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    man.write_json("verify.json", [{"check": n, "passed": p, "detail": d} for n, p, d in results])
    failed = [n for n, p, _ in results if not p]
    man.checks["failed"] = failed
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="basilica", description="Spectra of Basilica Schreier graphs.")
    p.add_argument("--out", type=Path, default=Path("basilica-out"), help="output directory")
    p.add_argument("--cache", default=None, help="polynomial cache root (default: $BASILICA_CACHE)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("graph", help="emit G_n or the Schreier graph")
    s.add_argument("-n", "--level", type=int, required=True)
    s.add_argument("--kind", choices=("G", "Gamma"), default="G")
    s.add_argument("--format", type=_formats, default=("json", "dot"))
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("charpoly", help="emit a/b/c/g/gamma/eta at one level")
    s.add_argument("-n", "--level", type=int, required=True)
    s.add_argument("--kinds", type=lambda t: tuple(t.split(",")), default=("a", "b", "c", "gamma", "eta"))
    s.add_argument("--route", choices=("c_only", "abc"), default="c_only")
    s.set_defaults(func=cmd_charpoly)

    s = sub.add_parser("factor", help="factor c_n into gamma_k powers")
    s.add_argument("-n", "--level", type=int, required=True)
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("spectrum", help="isolating intervals of the Dirichlet spectrum")
    s.add_argument("-n", "--level", type=int, required=True)
    s.add_argument("--width", type=_rational, default=None, help="refine intervals to this width")
    s.add_argument("--format", type=_formats, default=("json", "csv", "svg"))
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("measure", help="atoms of the normalised counting measure")
    s.add_argument("-n", "--level", type=int, required=True)
    s.add_argument("--format", type=_formats, default=("json", "csv", "svg"))
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("gaps", help="certified spectral gaps")
    s.add_argument("--max-level", type=int, default=14)
    s.add_argument("--min-width", type=_rational, default=mpq(1, 10**6))
    s.add_argument("--depth-budget", type=int, default=60)
    s.add_argument("--samples", type=int, default=100, help="escape samples to check (0 to skip)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", type=_formats, default=("json", "csv", "svg"))
    s.set_defaults(func=cmd_gaps)

    s = sub.add_parser("blowup", help="blowup patch with extend-by-zero eigenfunctions")
    s.add_argument("--increments", required=True, help='e.g. "1,2a,1,2b"')
    s.add_argument("--radius", type=int, default=None)
    s.add_argument("--ball-radius", type=lambda t: [int(x) for x in t.split(",")], default=[2, 4, 8])
    s.add_argument("--max-depth", type=int, default=12)
    s.set_defaults(func=cmd_blowup)

    s = sub.add_parser("verify", help="run the identity and oracle suite")
    s.add_argument("--max-level", type=int, default=8)
    s.set_defaults(func=cmd_verify)
    return p


def _config(args) -> dict:
    skip = {"func", "out", "cache"}
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        if isinstance(v, (tuple, list)):
            v = [str(x) for x in v]
        elif v is not None and not isinstance(v, (int, bool, str)):
            v = str(v)
        cfg[k] = v
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    man = io.Manifest(args.out, args.command, _config(args))
    status = EXIT_FAIL
    try:
        status = args.func(args, man)
        man.complete = status == EXIT_OK
        return status
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_USAGE
        return status
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_USAGE
        return status
    except AssertionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        status = EXIT_FAIL
        return status
    finally:
        man.flush()


if __name__ == "__main__":
    sys.exit(main())
