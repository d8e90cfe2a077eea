"""Minimal deterministic SVG emitters: stems, bars, ladders and polylines.

Coordinates are written with a fixed number of decimals so equal inputs give
byte-identical files.
"""

from __future__ import annotations

__all__ = ["Figure", "stem_plot", "gap_bar", "spectrum_ladder", "escape_plot"]


def _f(x: float) -> str:
    return f"{x:.3f}"


class Figure:
    """A plot area mapping data coordinates (x0..x1, y0..y1) to an SVG canvas."""

    def __init__(self, x0, x1, y0, y1, width=800, height=400, margin=50, title=""):
        self.x0, self.x1, self.y0, self.y1 = float(x0), float(x1), float(y0), float(y1)
        self.w, self.h, self.m = width, height, margin
        self.items: list[str] = []
        self.title = title

    def px(self, x) -> float:
        return self.m + (float(x) - self.x0) / (self.x1 - self.x0) * (self.w - 2 * self.m)

    def py(self, y) -> float:
        return self.h - self.m - (float(y) - self.y0) / (self.y1 - self.y0) * (self.h - 2 * self.m)

    def line(self, x, y, u, v, stroke="black", width=1.0):
        self.items.append(
            f'<line x1="{_f(self.px(x))}" y1="{_f(self.py(y))}" x2="{_f(self.px(u))}" '
            f'y2="{_f(self.py(v))}" stroke="{stroke}" stroke-width="{width}"/>'
        )

    def rect(self, x, y, u, v, fill="black", opacity=1.0):
        a, b = sorted((self.px(x), self.px(u)))
        c, d = sorted((self.py(y), self.py(v)))
        self.items.append(
            f'<rect x="{_f(a)}" y="{_f(c)}" width="{_f(max(b - a, 0.1))}" height="{_f(d - c)}" '
            f'fill="{fill}" fill-opacity="{opacity}"/>'
        )

    def polyline(self, pts, stroke="black", width=1.0):
        if len(pts) < 2:
            return
        s = " ".join(f"{_f(self.px(x))},{_f(self.py(y))}" for x, y in pts)
        self.items.append(f'<polyline points="{s}" fill="none" stroke="{stroke}" stroke-width="{width}"/>')

    def text(self, x, y, s, size=12, anchor="middle"):
        self.items.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}">{s}</text>'
        )

    def axes(self, xticks=(), yticks=()):
        self.line(self.x0, self.y0, self.x1, self.y0)
        self.line(self.x0, self.y0, self.x0, self.y1)
        for t in xticks:
            self.line(t, self.y0, t, self.y0 - (self.y1 - self.y0) * 0.01)
            self.text(self.px(t), self.h - self.m + 16, f"{t:g}", 10)
        for t in yticks:
            self.text(self.m - 6, self.py(t) + 4, f"{t:g}", 10, "end")

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w}" height="{self.h}" '
            f'viewBox="0 0 {self.w} {self.h}">'
        )
        body = ['<rect width="100%" height="100%" fill="white"/>']
        if self.title:
            body.append(f'<text x="{self.w / 2:.1f}" y="20" font-size="14" text-anchor="middle">{self.title}</text>')
        return "\n".join([head, *body, *self.items, "</svg>"]) + "\n"


def stem_plot(xs, ys, title="") -> str:
    """Vertical stems at ``xs`` with heights ``ys`` over [0, 8]."""
    top = max([float(y) for y in ys] + [1e-12]) * 1.05
    fig = Figure(0, 8, 0, top, title=title)
    for x, y in zip(xs, ys):
        fig.line(x, 0, x, y, stroke="navy", width=0.8)
    fig.axes(xticks=range(9), yticks=(0, top / 1.05))
    return fig.render()


def gap_bar(intervals, lo=0.0, hi=8.0, title="") -> str:
    """One horizontal bar over [lo, hi] with the given intervals cut out in white."""
    fig = Figure(lo, hi, 0, 1, height=160, title=title)
    fig.rect(lo, 0.3, hi, 0.7, fill="black")
    for a, b in intervals:
        fig.rect(a, 0.25, b, 0.75, fill="white")
    fig.axes(xticks=range(int(lo), int(hi) + 1))
    return fig.render()


def spectrum_ladder(levels: dict, title="") -> str:
    """One row of ticks per level k (top row k = 1) at the roots of gamma_k."""
    ks = sorted(levels)
    n = len(ks)
    fig = Figure(0, 8, 0, n + 1, height=max(200, 24 * n + 100), title=title)
    for i, k in enumerate(ks):
        y = n - i
        for x in levels[k]:
            fig.line(x, y - 0.35, x, y + 0.35, stroke="darkred", width=0.6)
        fig.text(fig.m - 8, fig.py(y) + 4, f"{k}", 10, "end")
    fig.axes(xticks=range(9))
    return fig.render()


def escape_plot(curve, limit=10.0, title="") -> str:
    """The curve (zeta_1, zeta_2) with the escape region |u| > 2, |v| > 2 shaded.

    ``curve`` is a list of polylines (break the curve at poles); points are
    clipped to the square [-limit, limit]^2.
    """
    fig = Figure(-limit, limit, -limit, limit, width=500, height=500, title=title)
    for sx in (-1, 1):
        for sy in (-1, 1):
            fig.rect(2 * sx, 2 * sy, limit * sx, limit * sy, fill="orange", opacity=0.25)
    for seg in curve:
        pts = [(x, y) for x, y in seg if abs(x) <= limit and abs(y) <= limit]
        fig.polyline(pts, stroke="navy", width=1.0)
    fig.line(-limit, 0, limit, 0, stroke="gray", width=0.5)
    fig.line(0, -limit, 0, limit, stroke="gray", width=0.5)
    ticks = [-limit, -2, 0, 2, limit]
    fig.axes(xticks=ticks, yticks=ticks)
    return fig.render()
