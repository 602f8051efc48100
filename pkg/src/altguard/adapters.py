"""Polygon classes that reduce to terrain guarding from a horizontal line.

A uni-monotone polygon is an x-monotone polygon whose upper chain is one
horizontal segment H; guarding it is guarding its lower chain from H. A
monotone mountain has a single straight base of any slope and is rotated
onto the uni-monotone case by an exact rational linear map.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from gmpy2 import mpq

from .geom import AltitudeLine, Coord, GeometryError, Point, Terrain, cross, to_coord
from .visibility import sees


class PolygonError(GeometryError):
    pass


def _as_points(ring) -> list[Point]:
    pts = [p if isinstance(p, Point) else Point.of(*p) for p in ring]
    out: list[Point] = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    # merge collinear runs around the ring
    changed = True
    while changed and len(out) > 3:
        changed = False
        for k in range(len(out)):
            a, b, c = out[k - 1], out[k], out[(k + 1) % len(out)]
            if cross(a, b, c) == 0:
                if (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y) < 0:
                    raise PolygonError("ring folds back on itself")
                del out[k]
                changed = True
                break
    if len(out) < 3:
        raise PolygonError("a polygon needs at least three non-collinear vertices")
    return out


@dataclass(frozen=True)
class UniMonotonePolygon:
    """Ring plus its decomposition into the top segment H and the lower chain."""

    ring: tuple[Point, ...]
    h_left: Point
    h_right: Point
    lower: Terrain

    @property
    def h_y(self) -> Coord:
        return self.h_left.y

    @classmethod
    def from_ring(cls, ring) -> "UniMonotonePolygon":
        pts = _as_points(ring)
        top = max(p.y for p in pts)
        x_lo = min(p.x for p in pts)
        x_hi = max(p.x for p in pts)
        m = len(pts)
        h = None
        for k in range(m):
            a, b = pts[k], pts[(k + 1) % m]
            if a.y == b.y == top and {a.x, b.x} == {x_lo, x_hi}:
                h = k
                break
        if h is None:
            raise PolygonError(
                "no horizontal edge spans the polygon's full x-range at its top"
            )
        a, b = pts[h], pts[(h + 1) % m]
        # walk from b around to a, away from H
        chain = [pts[(h + 1 + j) % m] for j in range(m)]
        if a.x > b.x:
            a, b = b, a
        else:
            chain.reverse()
        # chain now runs from a (left end of H) to b (right end of H)
        while len(chain) > 1 and chain[1].x == chain[0].x:
            chain.pop(0)
        while len(chain) > 1 and chain[-2].x == chain[-1].x:
            chain.pop()
        for p, q in zip(chain, chain[1:]):
            if not p.x < q.x:
                raise PolygonError("lower chain is not strictly x-monotone")
        if chain[0].x != x_lo or chain[-1].x != x_hi:
            raise PolygonError("lower chain does not join the ends of H")
        if any(p.y >= top for p in chain[1:-1]):
            raise PolygonError("lower chain touches H at an interior vertex")
        return cls(tuple(pts), Point(x_lo, top), Point(x_hi, top), Terrain(chain))

    def contains(self, p: Point) -> bool:
        """Closed point-in-polygon test."""
        if not self.lower.x_min <= p.x <= self.lower.x_max:
            return False
        return self.lower.height_at(p.x) <= p.y <= self.h_y

    def altitude(self) -> AltitudeLine:
        return AltitudeLine.over(self.lower, self.h_y, strict=False)

    def sees(self, a: Point, b: Point) -> bool:
        """Polygon visibility between two points of the closed polygon."""
        return sees(a, b, self.lower)


def from_uni_monotone(polygon) -> tuple[Terrain, AltitudeLine, Callable[[Coord], Point]]:
    """Terrain instance of a uni-monotone polygon and the embedding of guards on H."""
    P = polygon if isinstance(polygon, UniMonotonePolygon) else UniMonotonePolygon.from_ring(polygon)
    y = P.h_y

    def back_map(x: Coord) -> Point:
        return Point(mpq(x), y)

    return P.lower, P.altitude(), back_map


def project_guard_to_H(polygon, g: Point) -> Point:
    """The point of H vertically above an interior point ``g``."""
    P = polygon if isinstance(polygon, UniMonotonePolygon) else UniMonotonePolygon.from_ring(polygon)
    g = g if isinstance(g, Point) else Point.of(*g)
    if not P.contains(g):
        raise PolygonError(f"{g!r} lies outside the polygon")
    return Point(g.x, P.h_y)


@dataclass(frozen=True)
class MountainTransform:
    """Linear map sending base direction (dx, dy) to the positive x-axis.

    The matrix is [[dx, dy], [-dy, dx]] divided by ``scale``; ``scale`` is
    |dx| for a horizontal base (so the map is the identity there) and 1
    otherwise.
    """

    dx: Coord
    dy: Coord
    scale: Coord

    @classmethod
    def for_base(cls, a: Point, b: Point) -> "MountainTransform":
        dx, dy = b.x - a.x, b.y - a.y
        if dx == 0 and dy == 0:
            raise PolygonError("mountain base has zero length")
        return cls(dx, dy, abs(dx) if dy == 0 else mpq(1))

    def forward(self, p: Point) -> Point:
        s = self.scale
        return Point((self.dx * p.x + self.dy * p.y) / s, (-self.dy * p.x + self.dx * p.y) / s)

    def inverse(self, p: Point) -> Point:
        k = self.scale / (self.dx * self.dx + self.dy * self.dy)
        return Point((self.dx * p.x - self.dy * p.y) * k, (self.dy * p.x + self.dx * p.y) * k)


@dataclass(frozen=True)
class Mountain:
    ring: tuple[Point, ...]
    base: tuple[Point, Point]
    transform: MountainTransform
    image: UniMonotonePolygon

    def along(self, p: Point) -> Coord:
        """Position of ``p`` along the base direction."""
        return self.transform.dx * p.x + self.transform.dy * p.y

    def sees(self, a: Point, b: Point) -> bool:
        """Visibility computed in the mountain's own coordinates."""
        lo, hi = sorted((a, b), key=self.along)
        chain = self.image.lower.vertices
        # the chain lies on the right of the base direction; a vertex blocks
        # when it is strictly on the base side of the sightline
        for v in (self.transform.inverse(c) for c in chain):
            if self.along(lo) < self.along(v) < self.along(hi) and cross(lo, hi, v) > 0:
                return False
        return True


def _mountain_from_base(pts: list[Point], k: int) -> Mountain:
    m = len(pts)
    a, b = pts[k], pts[(k + 1) % m]
    others = [pts[(k + 2 + j) % m] for j in range(m - 2)]
    sides = {(cross(a, b, p) > 0) - (cross(a, b, p) < 0) for p in others}
    if 0 in sides or len(sides) != 1:
        raise PolygonError("chain does not lie strictly on one side of the base")
    if sides == {1}:
        a, b = b, a
    tf = MountainTransform.for_base(a, b)
    mapped = [tf.forward(p) for p in pts]
    return Mountain(tuple(pts), (a, b), tf, UniMonotonePolygon.from_ring(mapped))


def find_mountain(ring) -> Mountain:
    """Detect the base; a horizontal top edge is preferred so axis-aligned input maps identically."""
    pts = _as_points(ring)
    m = len(pts)
    top = max(p.y for p in pts)
    order = sorted(range(m), key=lambda k: not (pts[k].y == pts[(k + 1) % m].y == top))
    last: Optional[Exception] = None
    for k in order:
        try:
            return _mountain_from_base(pts, k)
        except PolygonError as e:
            last = e
    raise PolygonError(f"not a monotone mountain: {last}")


def from_monotone_mountain(ring) -> tuple[Terrain, AltitudeLine, Callable[[Coord], Point], Mountain]:
    """Terrain instance of a monotone mountain; ``back_map`` returns exact points on the base."""
    M = ring if isinstance(ring, Mountain) else find_mountain(ring)
    terrain, altitude, embed = from_uni_monotone(M.image)

    def back_map(x: Coord) -> Point:
        return M.transform.inverse(embed(x))

    return terrain, altitude, back_map, M


@dataclass
class MountainCheck:
    round_trip: bool
    counts_match: bool
    strips_ok: bool
    pairwise_disjoint: bool
    coverage_ok: bool

    @property
    def valid(self) -> bool:
        return (self.round_trip and self.counts_match and self.strips_ok
                and self.pairwise_disjoint and self.coverage_ok)


def check_mountain_solution(M: Mountain, solution, certificate) -> MountainCheck:
    """Re-check a solved mountain in its original coordinates.

    Guards and realized witnesses are mapped back; every witness must be
    seen by its own guard only, the back-mapped witness intervals must be
    disjoint along the base, and every chain vertex and edge midpoint must
    be seen by some guard.
    """
    tf = M.transform
    round_trip = all(tf.inverse(tf.forward(p)) == p for p in M.ring)
    y = M.image.h_y
    guards = [tf.inverse(Point(x, y)) for x in solution.guards]
    witnesses = [tf.inverse(p) for p in certificate.points]
    strips = all(
        [k for k, g in enumerate(guards) if M.sees(g, w)] == [i]
        for i, w in enumerate(witnesses)
    )
    spans = sorted(
        (M.along(tf.inverse(Point(iv.l, y))), M.along(tf.inverse(Point(iv.r, y))))
        for iv in certificate.intervals
    )
    disjoint = all(p[1] < q[0] for p, q in zip(spans, spans[1:]))
    chain = [tf.inverse(v) for v in M.image.lower.vertices]
    probes = chain + [Point((p.x + q.x) / 2, (p.y + q.y) / 2) for p, q in zip(chain, chain[1:])]
    coverage = all(any(M.sees(g, p) for g in guards) for p in probes) and certificate.coverage_ok
    return MountainCheck(round_trip, len(guards) == len(witnesses), strips, disjoint, coverage)


def random_uni_monotone(n: int, seed: int, profile: str = "random-walk",
                        vertical_ends: bool = False) -> UniMonotonePolygon:
    """Random uni-monotone polygon whose lower chain is a random terrain."""
    from .generate import random_terrain
    import random

    T = random_terrain(n, seed, profile)
    rng = random.Random(f"poly:{n}:{seed}:{profile}")
    top = T.max_y() + rng.randint(1, 10)
    chain = list(T.vertices)
    if not vertical_ends:
        chain[0] = Point(chain[0].x, top)
        chain[-1] = Point(chain[-1].x, top)
        if any(cross(p, q, r) == 0 for p, q, r in zip(chain, chain[1:], chain[2:])):
            return random_uni_monotone(n, seed + 7919, profile, vertical_ends)
        ring = chain[::-1]
    else:
        ring = [Point(chain[-1].x, top), Point(chain[0].x, top)] + chain
    return UniMonotonePolygon.from_ring(ring)


def random_mountain(n: int, seed: int, profile: str = "random-walk") -> list[Point]:
    """Random monotone mountain ring with a tilted base, built through an exact rational map."""
    import random

    rng = random.Random(f"mountain:{n}:{seed}:{profile}")
    P = random_uni_monotone(n, seed, profile)
    dx, dy = rng.randint(1, 6), rng.randint(-6, 6)
    tf = MountainTransform.for_base(Point(mpq(0), mpq(0)), Point(mpq(dx), mpq(dy)))
    shift = Point(to_coord(rng.randint(-50, 50)), to_coord(rng.randint(-50, 50)))
    ring = [tf.inverse(p) for p in P.ring]
    ring = [Point(p.x + shift.x, p.y + shift.y) for p in ring]
    if rng.random() < 0.5:
        ring.reverse()
    k = rng.randrange(len(ring))
    return ring[k:] + ring[:k]

