"""File formats: JSON/CSV/DOT serialisation, atomic writes and run manifests.

Big integers and rationals are written as decimal strings so nothing is lost
in JSON.  Every writer produces deterministic bytes for equal inputs.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from gmpy2 import mpq

from .cache import atomic_write, poly_to_json
from .exact.poly import IntPoly
from .exact.roots import IsolatingInterval
from .gaps import gaps_to_csv
from .graphs import MultiGraph

__all__ = [
    "q_str",
    "dumps",
    "poly_json",
    "interval_json",
    "graph_json",
    "graph_dot",
    "factorization_json",
    "measure_csv",
    "gaps_csv",
    "gap_json",
    "Manifest",
]


def q_str(x) -> str:
    """Exact rational as ``"p/q"`` (or ``"p"`` for integers)."""
    x = mpq(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def poly_json(p: IntPoly) -> dict:
    return poly_to_json(p)


def interval_json(iv: IsolatingInterval, **extra) -> dict:
    out = {"lo": q_str(iv.lo), "hi": q_str(iv.hi), "approx": repr(float(iv))}
    out.update(extra)
    return out


def graph_json(g: MultiGraph) -> dict:
    return {
        "kind": g.kind,
        "level": g.level,
        "vertices": [str(v) for v in g.vertices],
        "boundary": [str(b) for b in g.boundary],
        "edges": [[str(a), str(b), lab, m] for (a, b, lab), m in g.edges.items()],
        "loops": [[str(v), lab, m] for (v, lab), m in g.loops.items()],
    }


def graph_dot(g: MultiGraph) -> str:
    name = f"{g.kind}_{g.level}"
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        shape = "box" if v.is_boundary else "circle"
        lines.append(f'  "{v}" [shape={shape}];')
    for (a, b, lab), m in g.edges.items():
        style = "solid" if lab == "a" else "dashed"
        for _ in range(m):
            lines.append(f'  "{a}" -- "{b}" [label={lab}, style={style}];')
    for (v, lab), m in g.loops.items():
        for _ in range(m):
            lines.append(f'  "{v}" -- "{v}" [label={lab}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def factorization_json(fac) -> dict:
    return {
        "n": fac.n,
        "factors": [{"k": k, "exponent": e, "gamma": poly_json(p)} for k, p, e in fac.factors],
    }


def measure_csv(atoms) -> str:
    rows = ["root_lo,root_hi,level_k,weight_num,weight_den"]
    for a in atoms:
        w = mpq(a.weight)
        rows.append(f"{q_str(a.root.lo)},{q_str(a.root.hi)},{a.level},{w.numerator},{w.denominator}")
    return "\n".join(rows) + "\n"


def gaps_csv(gaps) -> str:
    return gaps_to_csv(gaps)


def gap_json(c) -> dict:
    return {"lo": q_str(c.lo), "hi": q_str(c.hi), "base_depth": c.base_depth, "route": c.route}


class Manifest:
    """Records every file written by a run; ``complete`` is set only on success."""

    def __init__(self, out_dir: Path, command: str, config: dict):
        self.out = Path(out_dir)
        self.command = command
        self.config = config
        self.files: list[dict] = []
        self.complete = False
        self.checks: dict = {}

    def write(self, name: str, data: str | bytes) -> Path:
        path = self.out / name
        raw = data.encode() if isinstance(data, str) else data
        atomic_write(path, raw)
        self.files = [f for f in self.files if f["name"] != name]
        self.files.append({"name": name, "bytes": len(raw), "sha256": hashlib.sha256(raw).hexdigest()})
        return path

    def write_json(self, name: str, obj) -> Path:
        return self.write(name, dumps(obj))

    def flush(self) -> Path:
        body = {
            "command": self.command,
            "config": self.config,
            "complete": self.complete,
            "checks": self.checks,
            "files": sorted(self.files, key=lambda f: f["name"]),
        }
        path = self.out / "MANIFEST.json"
        atomic_write(path, dumps(body))
        return path
