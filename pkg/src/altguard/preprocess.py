"""Mark points and per-edge (soft opening, opening, closing) events."""
from __future__ import annotations

from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .geom import AltitudeLine, Coord, GeometryError, Point, Ray, Terrain, cross, ray_hit_altitude
from .visibility import VisibilityInterval, visibility_interval

ZERO = mpq(0)
ONE = mpq(1)


@dataclass(frozen=True, order=True)
class Mark:
    """Where an extended vertex-to-vertex ray first runs into the terrain.

    ``stored`` is the right one of the two vertices defining the ray.
    """

    edge: int
    t: Coord
    stored: int

    def point(self, terrain: Terrain) -> Point:
        return terrain.point_on_edge(self.edge, self.t)


@dataclass(frozen=True)
class EdgeEvents:
    s: Coord
    o: Coord
    c: Coord


MarkTable = dict  # edge index -> sorted list[Mark]


def _group(marks: Iterable[Mark], n_edges: int) -> MarkTable:
    table = defaultdict(list)
    for m in marks:
        table[m.edge].append(m)
    return {i: sorted(table.get(i, ())) for i in range(n_edges)}


def _first_hit_left(terrain: Terrain, u: int, w: int) -> Optional[Mark]:
    """Follow the ray from v_w through v_u beyond v_u until the terrain rises above it."""
    verts = terrain.vertices
    vu, vw = verts[u], verts[w]
    f_prev = ZERO
    for k in range(u - 1, -1, -1):
        f = cross(vu, vw, verts[k])
        if f > 0:
            return Mark(k, f / (f - f_prev), w)
        f_prev = f
    return None


def marks_naive(terrain: Terrain) -> MarkTable:
    """All-pairs construction: one ray per mutually visible vertex pair."""
    verts = terrain.vertices
    marks = []
    for w in range(terrain.n - 1, 0, -1):
        vw = verts[w]
        best_num = best_den = None
        for u in range(w - 1, -1, -1):
            vu = verts[u]
            num, den = vu.y - vw.y, vw.x - vu.x
            # u is visible from w iff its elevation slope is not below the horizon so far
            if best_num is None or num * best_den >= best_num * den:
                m = _first_hit_left(terrain, u, w)
                if m is not None:
                    marks.append(m)
            if best_num is None or num * best_den > best_num * den:
                best_num, best_den = num, den
    return _group(marks, terrain.n_edges)


def marks_convex_hull(terrain: Terrain) -> MarkTable:
    """Marks from the upper hull of the suffix, built incrementally from the right.

    A hull edge popped while adding v_i has a ray extension that crosses
    edge i and can never reach further left, so at most n-1 marks arise.
    """
    verts = terrain.vertices
    hull = [terrain.n - 1]
    marks = []
    for i in range(terrain.n - 2, -1, -1):
        vi, vnext = verts[i], verts[i + 1]
        while len(hull) >= 2:
            h0, h1 = verts[hull[-1]], verts[hull[-2]]
            f0 = cross(h0, h1, vi)
            if f0 < 0:
                break
            if f0 > 0:
                f1 = cross(h0, h1, vnext)
                marks.append(Mark(i, f0 / (f0 - f1), hull[-2]))
            hull.pop()
        hull.append(i)
    return _group(marks, terrain.n_edges)


def mark_count(table: MarkTable) -> int:
    return sum(len(v) for v in table.values())


def _hit_or_end(p: Point, w: Point, altitude: AltitudeLine, end: Coord) -> Coord:
    if w.y <= p.y:
        return end
    return altitude.clamp(ray_hit_altitude(Ray(p, w), altitude).x)


def vertex_intervals(terrain: Terrain, altitude: AltitudeLine) -> list[VisibilityInterval]:
    """Visibility intervals of all vertices in O(n) via prefix and suffix upper hulls."""
    verts = terrain.vertices
    n = terrain.n
    lefts = [altitude.x_min] * n
    rights = [altitude.x_max] * n
    hull: list[Point] = []
    for k in range(n):
        v = verts[k]
        while len(hull) >= 2 and cross(hull[-2], hull[-1], v) >= 0:
            hull.pop()
        if hull:
            lefts[k] = _hit_or_end(v, hull[-1], altitude, altitude.x_min)
        hull.append(v)
    hull = []
    for k in range(n - 1, -1, -1):
        v = verts[k]
        while len(hull) >= 2 and cross(hull[-2], hull[-1], v) <= 0:
            hull.pop()
        if hull:
            rights[k] = _hit_or_end(v, hull[-1], altitude, altitude.x_max)
        hull.append(v)
    return [VisibilityInterval(min(l, v.x), max(r, v.x)) for l, r, v in zip(lefts, rights, verts)]


def edge_events(
    terrain: Terrain,
    altitude: AltitudeLine,
    marks: Optional[MarkTable] = None,
    intervals: Optional[Sequence[VisibilityInterval]] = None,
) -> list[EdgeEvents]:
    """Event triple for every edge.

    Candidates are the edge endpoints plus, when given, the edge's marks.
    """
    if intervals is None:
        intervals = vertex_intervals(terrain, altitude)
    out = []
    for i in range(terrain.n_edges):
        left, right = intervals[i], intervals[i + 1]
        o = max(left.l, right.l)
        c = min(left.r, right.r)
        if marks:
            for m in marks.get(i, ()):
                iv = visibility_interval(m.point(terrain), terrain, altitude)
                o = max(o, iv.l)
                c = min(c, iv.r)
        out.append(EdgeEvents(right.l, o, c))
    return out


class ClosingMismatch(AssertionError):
    """The single-ray closing disagrees with the reference minimization."""


def closing_reference(
    terrain: Terrain,
    altitude: AltitudeLine,
    edge: int,
    t_end: Coord,
    marks: Optional[MarkTable] = None,
    left_r: Optional[Coord] = None,
) -> Coord:
    """Min of right visibility bounds over the left vertex, the interior marks and q."""
    if t_end <= 0:
        raise GeometryError("empty sub-edge")
    if left_r is None:
        left_r = visibility_interval(terrain.vertices[edge], terrain, altitude).r
    best = left_r
    for m in (marks or {}).get(edge, ()):
        if 0 < m.t < t_end:
            best = min(best, visibility_interval(m.point(terrain), terrain, altitude).r)
    q = terrain.point_on_edge(edge, t_end)
    return min(best, visibility_interval(q, terrain, altitude).r)


def closing_fast(
    terrain: Terrain, altitude: AltitudeLine, edge: int, t_end: Coord, marks: MarkTable
) -> Optional[Coord]:
    """Right end of q's visibility via its tangent to the upper hull of the suffix.

    The first mark at or right of q stores that tangent vertex; with no such
    mark q lies under every hull edge popped at this edge, so the tangent is
    the edge's own right vertex.
    """
    if t_end >= 1:
        return None
    edge_marks = marks.get(edge, ())
    k = bisect_left([m.t for m in edge_marks], t_end)
    stored = edge_marks[k].stored if k < len(edge_marks) else edge + 1
    q = terrain.point_on_edge(edge, t_end)
    w = terrain.vertices[stored]
    if w.y <= q.y:
        return altitude.x_max
    return altitude.clamp(ray_hit_altitude(Ray(q, w), altitude).x)


def closing_of_interval(
    terrain: Terrain,
    altitude: AltitudeLine,
    edge: int,
    t_end: Coord,
    marks: MarkTable,
    check: bool = False,
    left_r: Optional[Coord] = None,
) -> Coord:
    """Closing x of the unseen prefix ``[v_edge, q)`` with ``q`` at parameter ``t_end``."""
    t_end = mpq(t_end)
    if not 0 < t_end <= 1:
        raise GeometryError("empty sub-edge")
    fast = closing_fast(terrain, altitude, edge, t_end, marks)
    if fast is None or check:
        ref = closing_reference(terrain, altitude, edge, t_end, marks, left_r)
        if fast is not None and fast != ref:
            raise ClosingMismatch(
                f"edge {edge} t={t_end}: single-ray closing {fast} != reference {ref}"
            )
        return ref
    return fast
