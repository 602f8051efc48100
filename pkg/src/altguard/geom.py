"""Exact rational kernel: coordinates, points, terrains, altitude lines, rays.

Every coordinate is a ``gmpy2.mpq``; nothing in the package ever rounds.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from gmpy2 import mpq

Coord = type(mpq(0))
CoordLike = Union[int, str, Fraction, "mpq"]


class GeometryError(ValueError):
    """An instance violates a geometric precondition."""


def to_coord(value: CoordLike) -> Coord:
    """Convert an int, a decimal/rational string or a Fraction exactly.

    Binary floats are refused: ``0.1`` has no exact decimal meaning.
    """
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a decimal string instead")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        value = value.strip()
        if not value:
            raise ValueError("empty coordinate string")
    return mpq(value)


def coord_str(c: Coord) -> str:
    """Canonical text form: ``"5"`` or ``"-7/3"``."""
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Point(NamedTuple):
    x: Coord
    y: Coord

    @classmethod
    def of(cls, x: CoordLike, y: CoordLike) -> "Point":
        return cls(to_coord(x), to_coord(y))

    def __repr__(self) -> str:
        return f"Point({coord_str(self.x)}, {coord_str(self.y)})"


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


def cross(o: Point, a: Point, b: Point) -> Coord:
    """Cross product of (a - o) and (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    """Side of ``r`` relative to the directed line ``p -> q``."""
    c = cross(p, q, r)
    if c > 0:
        return Orientation.LEFT
    if c < 0:
        return Orientation.RIGHT
    return Orientation.COLLINEAR


def lerp(a: Point, b: Point, t: Coord) -> Point:
    return Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


@dataclass(frozen=True)
class Ray:
    """Half-line starting at ``origin`` and passing through ``through``."""

    origin: Point
    through: Point

    def __post_init__(self):
        if self.origin == self.through:
            raise GeometryError("degenerate ray: origin equals through point")

    @property
    def direction(self) -> tuple[Coord, Coord]:
        return (self.through[0] - self.origin[0], self.through[1] - self.origin[1])


class Terrain:
    """An x-monotone polyline ``v_0 .. v_{n-1}``; edge ``i`` joins ``v_i`` and ``v_{i+1}``.

    Consecutive collinear vertices are merged on construction, so every
    interior vertex is a strict peak-type (reflex) or valley-type (convex) turn.
    """

    __slots__ = ("vertices", "xs", "ys")

    def __init__(self, vertices: Sequence[Union[Point, tuple]]):
        pts = [p if isinstance(p, Point) else Point.of(*p) for p in vertices]
        if len(pts) < 2:
            raise GeometryError("a terrain needs at least two vertices")
        for a, b in zip(pts, pts[1:]):
            if not a.x < b.x:
                raise GeometryError(
                    f"x-coordinates must strictly increase ({a!r} then {b!r})"
                )
        merged = [pts[0]]
        for p in pts[1:]:
            while len(merged) >= 2 and cross(merged[-2], merged[-1], p) == 0:
                merged.pop()
            merged.append(p)
        self.vertices: tuple[Point, ...] = tuple(merged)
        self.xs = [p.x for p in merged]
        self.ys = [p.y for p in merged]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.vertices) - 1

    @property
    def x_min(self) -> Coord:
        return self.xs[0]

    @property
    def x_max(self) -> Coord:
        return self.xs[-1]

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[i + 1]

    def point_on_edge(self, i: int, t: CoordLike) -> Point:
        a, b = self.edge(i)
        return lerp(a, b, mpq(t))

    def height_at(self, x: CoordLike) -> Coord:
        x = mpq(x)
        if not self.xs[0] <= x <= self.xs[-1]:
            raise GeometryError("x outside the terrain span")
        i = self.edge_index_at(x)
        a, b = self.edge(i)
        return a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x)

    def edge_index_at(self, x: Coord) -> int:
        """Index of an edge whose closed x-range contains ``x`` (leftmost on ties)."""
        from bisect import bisect_left

        i = bisect_left(self.xs, x) - 1
        return min(max(i, 0), self.n_edges - 1)

    def locate(self, p: Point) -> tuple[int, Coord]:
        """Return ``(edge, t)`` for a point lying on the terrain."""
        if not self.xs[0] <= p.x <= self.xs[-1]:
            raise GeometryError(f"{p!r} is not on the terrain")
        i = self.edge_index_at(p.x)
        a, b = self.edge(i)
        t = (p.x - a.x) / (b.x - a.x)
        if a.y + t * (b.y - a.y) != p.y:
            raise GeometryError(f"{p!r} is not on the terrain")
        return i, t

    def is_reflex(self, k: int) -> bool:
        """Peak-type vertex (reflex for the polygon lying above the chain).

        The chain endpoints count as convex.
        """
        if k <= 0 or k >= self.n - 1:
            return False
        return cross(self.vertices[k - 1], self.vertices[k], self.vertices[k + 1]) < 0

    def is_convex(self, k: int) -> bool:
        return not self.is_reflex(k)

    def max_y(self) -> Coord:
        return max(self.ys)

    def __eq__(self, other) -> bool:
        return isinstance(other, Terrain) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Terrain({list(self.vertices)!r})"


@dataclass(frozen=True)
class AltitudeLine:
    """Horizontal guard locus at height ``y`` spanning ``[x_min, x_max]``."""

    y: Coord
    x_min: Coord
    x_max: Coord

    @classmethod
    def over(cls, terrain: Terrain, y: CoordLike, strict: bool = True) -> "AltitudeLine":
        """Altitude line above ``terrain``.

        ``strict=False`` is the polygon-adapter mode: the line may touch the
        two chain endpoints but no other vertex.
        """
        y = to_coord(y)
        ys = terrain.ys
        if strict:
            if not all(v < y for v in ys):
                raise GeometryError("altitude line must lie strictly above every vertex")
        else:
            if not all(v <= y for v in ys) or not all(v < y for v in ys[1:-1]):
                raise GeometryError(
                    "altitude line may touch the terrain only at its two endpoints"
                )
        return cls(y, terrain.x_min, terrain.x_max)

    def clamp(self, x: Coord) -> Coord:
        return min(max(x, self.x_min), self.x_max)

    def point(self, x: CoordLike) -> Point:
        return Point(mpq(x), self.y)


def ray_hit_altitude(ray: Ray, altitude: Union[AltitudeLine, CoordLike]) -> Optional[Point]:
    """Where ``ray`` crosses the altitude height, or None if it never climbs.

    No span clamping happens here.
    """
    y = altitude.y if isinstance(altitude, AltitudeLine) else to_coord(altitude)
    o = ray.origin
    dx, dy = ray.direction
    if o.y >= y:
        raise GeometryError("ray origin must lie strictly below the altitude line")
    if dy <= 0:
        return None
    return Point(o.x + (y - o.y) * dx / dy, y)


def ray_hit_edge(ray: Ray, a: Point, b: Point) -> Optional[Point]:
    """Intersection of the part of ``ray`` strictly beyond ``through`` with segment ab.

    For a collinear overlap the overlap point closest to ``through`` is
    returned.
    """
    o, w = ray.origin, ray.through
    dx, dy = ray.direction
    ex, ey = b.x - a.x, b.y - a.y
    denom = dx * ey - dy * ex
    ax, ay = a.x - o.x, a.y - o.y
    if denom != 0:
        s = (ax * ey - ay * ex) / denom
        u = (ax * dy - ay * dx) / denom
        if s > 1 and 0 <= u <= 1:
            return Point(o.x + s * dx, o.y + s * dy)
        return None
    if ax * dy - ay * dx != 0:
        return None
    dd = dx * dx + dy * dy
    sa = (ax * dx + ay * dy) / dd
    sb = ((b.x - o.x) * dx + (b.y - o.y) * dy) / dd
    lo, hi = min(sa, sb), max(sa, sb)
    if hi <= 1:
        return None
    s = lo if lo > 1 else mpq(1)
    # s == 1 only when the overlap starts at ``through`` itself
    return Point(o.x + s * dx, o.y + s * dy) if s != 1 else w
