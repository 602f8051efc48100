"""Brute-force checks that share no code path with the sweep.

Coverage is decided exactly per edge by unioning parameter ranges; event
triples are recomputed from naive per-point visibility intervals; the lower
bound packs disjoint visibility intervals of sampled terrain points.
"""
from __future__ import annotations

from dataclasses import dataclass
from bisect import bisect_left
from itertools import combinations
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .geom import AltitudeLine, Coord, Point, Terrain, orientation, Orientation
from .preprocess import EdgeEvents, MarkTable, marks_convex_hull, marks_naive
from .visibility import ParamRange, VisibilityInterval, visibility_interval, visible_subsegment

ZERO, ONE = mpq(0), mpq(1)
SANITY_SAMPLES = 7


def _edge_ranges_from(g: Point, terrain: Terrain) -> list[Optional[ParamRange]]:
    """Visible parameter range of every edge from ``g``, one horizon scan per side."""
    verts = terrain.vertices
    n_edges = terrain.n_edges
    out: list[Optional[ParamRange]] = [None] * n_edges
    for i in range(n_edges):
        if verts[i].x <= g.x <= verts[i + 1].x:
            out[i] = ParamRange(ZERO, ONE)
    # rightwards: horizon is the vertex with the highest sightline so far
    horizon = None
    for i in range(n_edges):
        a, b = verts[i], verts[i + 1]
        if a.x <= g.x:
            continue
        out[i] = _range_beyond(g, horizon, a, b, left_side=True)
        if horizon is None or orientation(g, horizon, a) == Orientation.LEFT:
            horizon = a
    horizon = None
    for i in range(n_edges - 1, -1, -1):
        a, b = verts[i], verts[i + 1]
        if b.x >= g.x:
            continue
        out[i] = _range_beyond(g, horizon, b, a, left_side=False)
        if horizon is None or orientation(g, horizon, b) == Orientation.RIGHT:
            horizon = b
    return out


def _range_beyond(g, horizon, near, far, left_side: bool) -> Optional[ParamRange]:
    """Seen part of segment near-far (near closest to g) given the blocking horizon vertex."""
    above = Orientation.LEFT if left_side else Orientation.RIGHT
    below = Orientation.RIGHT if left_side else Orientation.LEFT

    def on_or_above(h, p):
        return orientation(g, h, p) != below

    lo, hi = ZERO, ONE  # parameter measured from ``near``
    facing = on_or_above(near, far)
    if not facing:
        hi = ZERO
    if horizon is not None:
        if not on_or_above(horizon, near):
            if not facing or not on_or_above(horizon, far):
                return None
            # crossing of the horizon sightline with the edge
            from .geom import cross

            fn, ff = cross(g, horizon, near), cross(g, horizon, far)
            lo = fn / (fn - ff)
    if lo > hi:
        return None
    if left_side:
        return ParamRange(lo, hi)
    return ParamRange(ONE - hi, ONE - lo)


def edge_coverage(guards: Iterable[Coord], terrain: Terrain, altitude: AltitudeLine,
                  exhaustive: bool = False) -> list[list[ParamRange]]:
    """Per edge, the parameter ranges seen by each guard."""
    per_edge: list[list[ParamRange]] = [[] for _ in range(terrain.n_edges)]
    for x in guards:
        g = Point(mpq(x), altitude.y)
        if exhaustive:
            ranges = [visible_subsegment(g, terrain, i) for i in range(terrain.n_edges)]
        else:
            ranges = _edge_ranges_from(g, terrain)
        for i, r in enumerate(ranges):
            if r is not None:
                per_edge[i].append(r)
    return per_edge


def union_covers(ranges: Sequence[ParamRange], lo=ZERO, hi=ONE) -> bool:
    reach = None
    for r in sorted(ranges, key=lambda r: r.lo):
        if reach is None:
            if r.lo > lo:
                return False
            reach = r.hi
        elif r.lo > reach:
            return False
        else:
            reach = max(reach, r.hi)
        if reach >= hi:
            return True
    return reach is not None and reach >= hi


def verify_coverage(guards: Iterable[Coord], terrain: Terrain, altitude: AltitudeLine,
                    exhaustive: bool = False) -> bool:
    """True iff the guards jointly see every point of every edge."""
    return all(union_covers(r) for r in edge_coverage(guards, terrain, altitude, exhaustive))


def uncovered_edges(guards, terrain, altitude) -> list[int]:
    return [i for i, r in enumerate(edge_coverage(guards, terrain, altitude)) if not union_covers(r)]


@dataclass(frozen=True)
class CriticalSet:
    """Sorted, deduplicated candidate parameters per edge."""

    params: tuple[tuple[Coord, ...], ...]

    @classmethod
    def build(cls, terrain: Terrain, marks: Optional[MarkTable] = None, refinement: int = 0):
        if marks is None:
            marks = marks_convex_hull(terrain)
        params = []
        for i in range(terrain.n_edges):
            ts = sorted({ZERO, ONE, *(m.t for m in marks.get(i, ()))})
            for _ in range(refinement):
                mids = [(a + b) / 2 for a, b in zip(ts, ts[1:])]
                ts = sorted(set(ts) | set(mids))
            params.append(tuple(ts))
        return cls(tuple(params))

    def points(self, terrain: Terrain) -> list[Point]:
        pts = []
        seen = set()
        for i, ts in enumerate(self.params):
            for t in ts:
                p = terrain.point_on_edge(i, t)
                if p not in seen:
                    seen.add(p)
                    pts.append(p)
        return pts


def events_reference(terrain: Terrain, altitude: AltitudeLine) -> list[EdgeEvents]:
    """Event triples by direct optimization over endpoints and all-pairs marks.

    Dense interior samples act as a sanity band: each must see at least
    the whole strong-visibility stretch ``[o, c]``.
    """
    marks = marks_naive(terrain)
    out = []
    for i in range(terrain.n_edges):
        a, b = terrain.edge(i)
        cands = [a, b] + [m.point(terrain) for m in marks.get(i, ())]
        ivs = [visibility_interval(p, terrain, altitude) for p in cands]
        o = max(iv.l for iv in ivs)
        c = min(iv.r for iv in ivs)
        s = visibility_interval(b, terrain, altitude).l
        for k in range(1, SANITY_SAMPLES + 1):
            t = mpq(k, SANITY_SAMPLES + 1)
            iv = visibility_interval(terrain.point_on_edge(i, t), terrain, altitude)
            if not (iv.l <= o and c <= iv.r):
                raise AssertionError(f"edge {i}: sample t={t} sees only {iv}, not [{o}, {c}]")
        out.append(EdgeEvents(s, o, c))
    return out


def greedy_piercing(intervals: Sequence[VisibilityInterval]) -> tuple[int, list[Coord]]:
    """Minimum stabbing set of closed intervals (stab at the smallest right end).

    The count equals the maximum number of pairwise disjoint intervals.
    """
    stabs: list[Coord] = []
    for iv in sorted(intervals, key=lambda iv: iv.r):
        if stabs and iv.l <= stabs[-1]:
            continue
        stabs.append(iv.r)
    return len(stabs), stabs


def max_disjoint_bruteforce(intervals: Sequence[VisibilityInterval]) -> int:
    """Exhaustive maximum pairwise-disjoint subfamily, for small families."""
    ivs = list(intervals)
    for k in range(len(ivs), 0, -1):
        for combo in combinations(ivs, k):
            if all(a.disjoint(b) for a, b in combinations(combo, 2)):
                return k
    return 0


def min_piercing_bruteforce(intervals: Sequence[VisibilityInterval]) -> int:
    """Exhaustive minimum stabbing set drawn from the right endpoints."""
    ivs = list(intervals)
    if not ivs:
        return 0
    cands = sorted({iv.r for iv in ivs})
    for k in range(1, len(cands) + 1):
        for combo in combinations(cands, k):
            if all(any(iv.l <= x <= iv.r for x in combo) for iv in ivs):
                return k
    return len(cands)


SHADOW_OFFSET = mpq(1, 2**32)


def _bound_of(terrain: Terrain, altitude: AltitudeLine, pts: Sequence[Point]) -> tuple[int, list[Coord]]:
    return greedy_piercing([visibility_interval(p, terrain, altitude) for p in pts])


def piercing_lower_bound(terrain: Terrain, altitude: AltitudeLine, refinement: int = 0) -> int:
    """Lower bound on the optimum: disjoint visibility intervals of critical points."""
    pts = CriticalSet.build(terrain, refinement=refinement).points(terrain)
    return _bound_of(terrain, altitude, pts)[0]


def shadow_points(terrain: Terrain, altitude: AltitudeLine, xs: Iterable[Coord],
                  base: CriticalSet) -> list[Point]:
    """Points just either side of every shadow boundary cast from the altitude positions ``xs``."""
    out = []
    for x in xs:
        g = Point(mpq(x), altitude.y)
        for i, r in enumerate(_edge_ranges_from(g, terrain)):
            if r is None:
                continue
            ts = base.params[i]
            for t in {r.lo, r.hi}:
                k = bisect_left(ts, t)
                lo = ts[k - 1] if k > 0 else t
                hi = ts[k] if k < len(ts) and ts[k] > t else (ts[k + 1] if k + 1 < len(ts) else t)
                for p in {t - (t - lo) * SHADOW_OFFSET, t, t + (hi - t) * SHADOW_OFFSET}:
                    out.append(terrain.point_on_edge(i, p))
    return out


def escalating_lower_bound(terrain: Terrain, altitude: AltitudeLine, target: int,
                           max_refinement: int = 3, shadow_rounds: int = 4) -> tuple[int, int]:
    """Raise refinement until the bound reaches ``target``; returns (bound, level used).

    After the midpoint levels, each further level adds shadow points cast
    from the current greedy stabs.
    """
    best = 0
    for level in range(max_refinement + 1):
        best = max(best, piercing_lower_bound(terrain, altitude, level))
        if best >= target:
            return best, level
    base = CriticalSet.build(terrain)
    pts = base.points(terrain)
    for k in range(shadow_rounds):
        bound, stabs = _bound_of(terrain, altitude, pts)
        best = max(best, bound)
        if best >= target:
            return best, max_refinement + k
        pts = pts + shadow_points(terrain, altitude, stabs, base)
    best = max(best, _bound_of(terrain, altitude, pts)[0])
    return best, max_refinement + shadow_rounds
