"""Static SVG pictures of orbits (cobweb and per-step bars)."""

from __future__ import annotations

from .algebra import AlgValue
from .pwl import Symbol

SIZE = 800
MARGIN = 60
COLORS = ("#c0392b", "#2471a3", "#1e8449", "#7d3c98")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, lo: float, hi: float):
        self.lo, self.hi = lo, hi
        self.items: list[str] = []

    def x(self, v: float) -> float:
        return MARGIN + (v - self.lo) / (self.hi - self.lo) * (SIZE - 2 * MARGIN)

    def y(self, v: float) -> float:
        return SIZE - MARGIN - (v - self.lo) / (self.hi - self.lo) * (SIZE - 2 * MARGIN)

    def line(self, x1, y1, x2, y2, color="#000", width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                          f'stroke="{color}" stroke-width="{width}"{extra}/>')

    def polyline(self, pts, color, width=1.0):
        body = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
        self.items.append(f'<polyline points="{body}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def text(self, x, y, s, size=14, anchor="start"):
        self.items.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="monospace" font-size="{size}" '
                          f'text-anchor="{anchor}">{s}</text>')

    def rect(self, x, y, w, h, color):
        self.items.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" fill="{color}"/>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">\n<rect width="{SIZE}" height="{SIZE}" fill="#fff"/>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def _start_points(m, points):
    out = []
    for p in points:
        if isinstance(p, Symbol) or (isinstance(p, str) and p.strip().startswith("c")):
            sym = p if isinstance(p, Symbol) else Symbol.parse(p)
            out.append((str(sym), m.turning_point(sym.index)))
        else:
            v = AlgValue.of(p, m.alpha)
            out.append((f"{float(v):.4g}", v))
    return out


def cobweb_svg(m, points, n: int, title: str = "") -> str:
    """Graph of the map, the diagonal and the cobweb of each start point for ``n`` steps."""
    lo, hi = (float(v) for v in m.domain())
    cv = _Canvas(lo, hi)
    cv.line(cv.x(lo), cv.y(lo), cv.x(hi), cv.y(lo), "#888")
    cv.line(cv.x(lo), cv.y(lo), cv.x(lo), cv.y(hi), "#888")
    cv.line(cv.x(lo), cv.y(lo), cv.x(hi), cv.y(hi), "#aaa", dash="4 4")
    knots = [m.domain()[0], *m.turning_points(), m.domain()[1]]
    graph = [(cv.x(float(k)), cv.y(float(m.evaluate(k)))) for k in knots]
    cv.polyline(graph, "#000", 2.0)
    for cp in m.turning_points():
        cv.line(cv.x(float(cp)), cv.y(lo), cv.x(float(cp)), cv.y(hi), "#ddd", dash="2 4")
    for k, (label, x0) in enumerate(_start_points(m, points)):
        color = COLORS[k % len(COLORS)]
        orbit = [float(p.value) for p in m.orbit(x0, n)]
        pts = [(cv.x(orbit[0]), cv.y(lo))]
        for a, b in zip(orbit, orbit[1:]):
            pts.append((cv.x(a), cv.y(b)))
            pts.append((cv.x(b), cv.y(b)))
        cv.polyline(pts, color, 1.5)
        cv.text(MARGIN + 10, 30 + 18 * k, label, anchor="start")
        cv.rect(MARGIN - 6, 20 + 18 * k, 12, 12, color)
    if title:
        cv.text(SIZE / 2, SIZE - 20, title, anchor="middle")
    return cv.render()


def orbit_bars_svg(m, points, n: int, title: str = "") -> str:
    """One row of vertical ticks per start point: the orbit value at each step."""
    lo, hi = (float(v) for v in m.domain())
    cv = _Canvas(lo, hi)
    starts = _start_points(m, points)
    rows = max(len(starts), 1)
    band = (SIZE - 2 * MARGIN) / rows
    for k, (label, x0) in enumerate(starts):
        color = COLORS[k % len(COLORS)]
        top = MARGIN + k * band
        cv.text(MARGIN, top + 16, label)
        step_h = (band - 30) / max(n + 1, 1)
        for p in m.orbit(x0, n):
            yy = top + 24 + p.step * step_h
            cv.line(cv.x(lo), yy, cv.x(hi), yy, "#eee")
            cv.rect(cv.x(float(p.value)) - 2, yy - step_h / 2 + 1, 4, max(step_h - 2, 1), color)
        for cp in m.turning_points():
            cv.line(cv.x(float(cp)), top + 20, cv.x(float(cp)), top + band - 4, "#999", dash="2 4")
    if title:
        cv.text(SIZE / 2, SIZE - 20, title, anchor="middle")
    return cv.render()


def plot_svg(m, points, n: int, style: str = "cobweb", title: str = "") -> str:
    if style == "cobweb":
        return cobweb_svg(m, points, n, title)
    if style == "orbit-bars":
        return orbit_bars_svg(m, points, n, title)
    raise ValueError(f"unknown style {style!r}")
