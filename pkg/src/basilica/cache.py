"""Versioned on-disk cache of polynomial sequences.

Layout: ``<root>/v1/<kind>/<n>.json`` where each file holds
``{"degree": d, "coeffs": [decimal strings, low to high]}``.  The root comes
from the ``BASILICA_CACHE`` environment variable unless given explicitly.
Writes go to a temporary file that is then renamed, so readers never see a
partial file.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import gmpy2
from gmpy2 import mpz

from .exact.poly import IntPoly

__all__ = ["PolyCache", "poly_to_json", "poly_from_json", "CACHE_ENV", "CACHE_VERSION", "atomic_write"]

CACHE_ENV = "BASILICA_CACHE"
CACHE_VERSION = "v1"
KINDS = ("a", "b", "c", "g", "gamma", "eta")


def poly_to_json(p: IntPoly) -> dict:
    # gmpy2's digit conversion is not subject to Python's int-to-str limit
    return {"degree": p.degree, "coeffs": [gmpy2.digits(c) for c in p.coeffs]}


def poly_from_json(obj: dict) -> IntPoly:
    p = IntPoly([mpz(s) for s in obj["coeffs"]])
    if p.degree != obj["degree"]:
        raise ValueError("degree field does not match coefficients")
    return p


def atomic_write(path: Path, data: str | bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class PolyCache:
    """Read-through cache keyed by (kind, level)."""

    def __init__(self, root: str | os.PathLike | None = None):
        if root is None:
            root = os.environ.get(CACHE_ENV)
        self.root = Path(root) / CACHE_VERSION if root else None

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def path(self, kind: str, n: int) -> Path:
        if kind not in KINDS:
            raise ValueError(f"unknown sequence kind {kind!r}")
        if self.root is None:
            raise RuntimeError("cache is disabled")
        return self.root / kind / f"{n}.json"

    def get(self, kind: str, n: int) -> IntPoly | None:
        if self.root is None:
            return None
        p = self.path(kind, n)
        if not p.exists():
            return None
        with open(p) as fh:
            return poly_from_json(json.load(fh))

    def put(self, kind: str, n: int, poly: IntPoly) -> None:
        if self.root is None:
            return
        atomic_write(self.path(kind, n), json.dumps(poly_to_json(poly), separators=(",", ":")))

    def clear(self) -> None:
        if self.root is None or not self.root.exists():
            return
        for kind in KINDS:
            d = self.root / kind
            if d.exists():
                for f in d.glob("*.json"):
                    f.unlink()
