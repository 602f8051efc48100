"""Visibility between the altitude line and the terrain.

A segment sees past a vertex that lies exactly on it: visibility is closed.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional

from gmpy2 import mpq

from .geom import AltitudeLine, Coord, GeometryError, Point, Ray, Terrain, cross, ray_hit_altitude


@dataclass(frozen=True)
class VisibilityInterval:
    """The closed stretch ``[l, r]`` of the altitude line that sees one terrain point."""

    l: Coord
    r: Coord

    def __contains__(self, x) -> bool:
        return self.l <= x <= self.r

    def disjoint(self, other: "VisibilityInterval") -> bool:
        return self.r < other.l or other.r < self.l


@dataclass(frozen=True)
class ParamRange:
    """Parameter interval ``[lo, hi]`` (or ``[lo, hi)``) along one terrain edge."""

    lo: Coord
    hi: Coord
    hi_closed: bool = True

    def __contains__(self, t) -> bool:
        if t < self.lo:
            return False
        return t <= self.hi if self.hi_closed else t < self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi


def sees(a: Point, p: Point, terrain: Terrain) -> bool:
    """True iff segment ``ap`` is nowhere strictly below the terrain.

    Both endpoints must lie on or above the terrain inside its x-span.
    """
    lo, hi = (a, p) if a.x <= p.x else (p, a)
    xs = terrain.xs
    verts = terrain.vertices
    start = bisect_right(xs, lo.x)
    stop = bisect_left(xs, hi.x)
    for k in range(start, stop):
        if cross(lo, hi, verts[k]) > 0:
            return False
    return True


def _max_rise(p: Point, verts, indices) -> Optional[Point]:
    """Vertex among ``indices`` maximizing rise per unit horizontal distance from p."""
    best = None
    best_num = best_den = None
    for k in indices:
        v = verts[k]
        num = v.y - p.y
        if num <= 0:
            continue
        den = abs(v.x - p.x)
        if best is None or num * best_den > best_num * den:
            best, best_num, best_den = v, num, den
    return best


def visibility_interval(p: Point, terrain: Terrain, altitude: AltitudeLine) -> VisibilityInterval:
    """Exact ``[l, r]`` of altitude-line x-positions that see terrain point ``p``."""
    terrain.locate(p)
    xs = terrain.xs
    verts = terrain.vertices
    left = range(0, bisect_left(xs, p.x))
    right = range(bisect_right(xs, p.x), terrain.n)
    l, r = altitude.x_min, altitude.x_max
    w = _max_rise(p, verts, left)
    if w is not None:
        l = max(l, ray_hit_altitude(Ray(p, w), altitude).x)
    w = _max_rise(p, verts, right)
    if w is not None:
        r = min(r, ray_hit_altitude(Ray(p, w), altitude).x)
    return VisibilityInterval(min(l, p.x), max(r, p.x))


def _clip(lo: Coord, hi: Coord, alpha: Coord, beta: Coord):
    """Intersect ``[lo, hi]`` with ``{t : alpha + beta * t <= 0}``."""
    if beta == 0:
        return (lo, hi) if alpha <= 0 else None
    root = -alpha / beta
    if beta > 0:
        hi = min(hi, root)
    else:
        lo = max(lo, root)
    return (lo, hi) if lo <= hi else None


def visible_subsegment(
    g: Point,
    terrain: Terrain,
    edge: int,
    t_end: Coord = mpq(1),
    include_end: bool = True,
) -> Optional[ParamRange]:
    """Parameters of edge ``edge`` (restricted to ``[0, t_end]``/``[0, t_end)``) seen from ``g``.

    Each vertex between ``g`` and the edge contributes one linear constraint
    on the edge parameter; their intersection is a single interval.
    """
    if g.x < terrain.x_min or g.x > terrain.x_max:
        raise GeometryError("guard outside the terrain span")
    a, b = terrain.edge(edge)
    t_end = mpq(t_end)
    span = (mpq(0), t_end)
    verts = terrain.vertices
    if g.x < a.x:
        own = edge
        blockers = range(bisect_right(terrain.xs, g.x), edge + 1)
        sign = -1
    elif g.x > b.x:
        own = edge + 1
        blockers = range(edge + 1, bisect_left(terrain.xs, g.x))
        sign = 1
    else:
        blockers = range(0)
        own = None
        sign = 1
    for k in blockers:
        v = verts[k]
        # v must lie on or below the sightline: sign * cross(g, v, p(t)) <= 0
        fa = sign * cross(g, v, a)
        fb = sign * cross(g, v, b)
        alpha, beta = fa, fb - fa
        if k == own:
            # the edge's own endpoint: only binds away from that endpoint
            if k == edge and beta > 0:
                span = (span[0], min(span[1], mpq(0)))
            elif k == edge + 1 and beta < 0:
                span = (max(span[0], mpq(1)), span[1])
            if span[0] > span[1]:
                return None
            continue
        span = _clip(span[0], span[1], alpha, beta)
        if span is None:
            return None
    lo, hi = span
    if not include_end and hi >= t_end:
        if lo >= t_end:
            return None
        return ParamRange(lo, t_end, hi_closed=False)
    return ParamRange(lo, hi)
