"""Static SVG pictures of an instance and its solution."""
from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from .geom import AltitudeLine, Terrain
from .preprocess import edge_events

WIDTH = 800
MARGIN = 20
EVENT_COLORS = {"s": "#1b9e77", "o": "#7570b3", "c": "#d95f02"}


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


class _Frame:
    def __init__(self, terrain: Terrain, altitude: AltitudeLine):
        self.x0 = float(terrain.x_min)
        span = float(terrain.x_max) - self.x0 or 1.0
        self.y_lo = float(min(terrain.ys))
        self.y_hi = float(altitude.y)
        self.k = (WIDTH - 2 * MARGIN) / span
        self.height = int((self.y_hi - self.y_lo) * self.k) + 2 * MARGIN + 20

    def __call__(self, x, y) -> tuple[str, str]:
        px = MARGIN + (float(x) - self.x0) * self.k
        py = MARGIN + 10 + (self.y_hi - float(y)) * self.k
        return _fmt(px), _fmt(py)


def render_svg(
    terrain: Terrain,
    altitude: AltitudeLine,
    solution=None,
    certificate=None,
    events: bool = False,
    title: Optional[str] = None,
) -> str:
    """SVG text; byte-identical for identical inputs.

    Terrain is black, the altitude line red, guards are filled dots and
    witnesses hollow squares with their visibility strip shaded.
    """
    f = _Frame(terrain, altitude)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{f.height}" '
        f'viewBox="0 0 {WIDTH} {f.height}">'
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    if certificate is not None:
        for p, iv in zip(certificate.points, certificate.intervals):
            pts = " ".join(",".join(f(*q)) for q in ((iv.l, altitude.y), (iv.r, altitude.y), (p.x, p.y)))
            out.append(f'<polygon class="strip" points="{pts}" fill="#4477aa" fill-opacity="0.15" stroke="none"/>')
    pts = " ".join(",".join(f(v.x, v.y)) for v in terrain.vertices)
    out.append(f'<polyline class="terrain" points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    (ax1, ay), (ax2, _) = f(altitude.x_min, altitude.y), f(altitude.x_max, altitude.y)
    out.append(f'<line class="altitude" x1="{ax1}" y1="{ay}" x2="{ax2}" y2="{ay}" stroke="red" stroke-width="1.5"/>')
    if events:
        for i, ev in enumerate(edge_events(terrain, altitude)):
            for name in ("s", "o", "c"):
                x, y = f(getattr(ev, name), altitude.y)
                out.append(
                    f'<circle class="event-{name}" data-edge="{i}" cx="{x}" cy="{y}" r="2" '
                    f'fill="{EVENT_COLORS[name]}"/>'
                )
    if solution is not None:
        for g in solution.guards:
            x, y = f(g, altitude.y)
            out.append(f'<circle class="guard" cx="{x}" cy="{y}" r="4" fill="black"/>')
    if certificate is not None:
        for w, p in zip(certificate.witnesses, certificate.points):
            x, y = f(p.x, p.y)
            label = quoteattr(w.kind.value)
            out.append(
                f'<rect class="witness" data-kind={label} x="{_fmt(float(x) - 3)}" y="{_fmt(float(y) - 3)}" '
                f'width="6" height="6" fill="white" stroke="#4477aa"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
