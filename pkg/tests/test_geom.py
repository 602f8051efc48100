from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from altguard.geom import (
    AltitudeLine,
    GeometryError,
    Orientation,
    Point,
    Ray,
    Terrain,
    coord_str,
    orientation,
    ray_hit_altitude,
    ray_hit_edge,
    to_coord,
)

from conftest import P

coords = st.fractions(min_value=-50, max_value=50, max_denominator=20).map(to_coord)
points = st.builds(Point, coords, coords)


class TestCoord:
    def test_decimal_strings_are_exact(self):
        assert to_coord("0.1") == mpq(1, 10)
        assert to_coord("-7/3") == mpq(-7, 3)
        assert to_coord(Fraction(5, 2)) == mpq(5, 2)

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            to_coord(0.5)

    def test_normalized(self):
        c = to_coord("6/4")
        assert (c.numerator, c.denominator) == (3, 2)
        assert coord_str(to_coord("-10/4")) == "-5/2"
        assert coord_str(to_coord("8")) == "8"

    @given(coords)
    def test_text_round_trip(self, c):
        assert to_coord(coord_str(c)) == c


class TestOrientation:
    def test_examples(self):
        assert orientation(P(0, 0), P(1, 0), P(0, 1)) is Orientation.LEFT
        assert orientation(P(0, 0), P(1, 1), P(2, 2)) is Orientation.COLLINEAR
        assert orientation(P(0, 0), P(2, 4), P(4, 0)) is Orientation.RIGHT

    @given(points, points, points)
    def test_antisymmetric(self, p, q, r):
        assert orientation(p, q, r) == -orientation(p, r, q)

    @given(points, points, points, points)
    def test_translation_invariant(self, p, q, r, d):
        def sh(a):
            return Point(a.x + d.x, a.y + d.y)

        assert orientation(sh(p), sh(q), sh(r)) == orientation(p, q, r)


class TestRays:
    def test_degenerate_ray(self):
        with pytest.raises(GeometryError):
            Ray(P(1, 1), P(1, 1))

    def test_hit_altitude_examples(self):
        assert ray_hit_altitude(Ray(P(0, 0), P(2, 4)), 5) == P("2.5", 5)
        assert ray_hit_altitude(Ray(P(4, 0), P(6, 4)), 5) == P("6.5", 5)
        assert ray_hit_altitude(Ray(P(0, 0), P(1, 0)), 5) is None

    @given(points, points, st.integers(60, 90))
    def test_hit_altitude_exact(self, o, w, y):
        if o == w:
            return
        hit = ray_hit_altitude(Ray(o, w), y)
        if w.y <= o.y:
            assert hit is None
            return
        assert hit.y == y
        # collinear with the ray and on its forward side
        assert orientation(o, w, hit) is Orientation.COLLINEAR
        assert (hit.y - o.y) * (w.y - o.y) > 0

    def test_hit_edge_examples(self):
        assert ray_hit_edge(Ray(P(8, 0), P(6, 4)), P(0, 0), P(2, 4)) is None
        assert ray_hit_edge(Ray(P(4, 0), P(2, 4)), P(0, 0), P(2, 4)) is None
        assert ray_hit_edge(Ray(P(0, 5), P(1, 4)), P(2, 2), P(4, 4)) == P("2.5", "2.5")

    @given(points, points, points, points)
    def test_hit_edge_satisfies_both_equations(self, o, w, a, b):
        if o == w or a == b:
            return
        hit = ray_hit_edge(Ray(o, w), a, b)
        if hit is None:
            return
        assert orientation(o, w, hit) is Orientation.COLLINEAR
        assert orientation(a, b, hit) is Orientation.COLLINEAR
        assert min(a.x, b.x) <= hit.x <= max(a.x, b.x)
        assert min(a.y, b.y) <= hit.y <= max(a.y, b.y)
        # beyond the through point
        dx, dy = w.x - o.x, w.y - o.y
        assert (hit.x - o.x) * dx + (hit.y - o.y) * dy >= dx * dx + dy * dy


class TestTerrain:
    def test_requires_increasing_x(self):
        with pytest.raises(GeometryError):
            Terrain([(0, 0), (0, 1)])
        with pytest.raises(GeometryError):
            Terrain([(0, 0)])

    def test_collinear_runs_merge(self):
        t = Terrain([(0, 0), (1, 1), (2, 2), (3, 0)])
        assert t.vertices == (P(0, 0), P(2, 2), P(3, 0))

    def test_reflex_and_convex(self):
        t = Terrain([(0, 0), (2, 4), (4, 0), (6, 4), (8, 0)])
        assert [t.is_reflex(k) for k in range(5)] == [False, True, False, True, False]
        assert t.is_convex(0) and t.is_convex(4) and t.is_convex(2)

    def test_locate(self):
        t = Terrain([(0, 0), (2, 4), (4, 0)])
        assert t.locate(P(1, 2)) == (0, mpq(1, 2))
        with pytest.raises(GeometryError):
            t.locate(P(1, 3))

    def test_altitude_modes(self):
        t = Terrain([(0, 5), (2, 1), (4, 5)])
        with pytest.raises(GeometryError):
            AltitudeLine.over(t, 5)
        a = AltitudeLine.over(t, 5, strict=False)
        assert (a.x_min, a.x_max) == (0, 4)
        with pytest.raises(GeometryError):
            AltitudeLine.over(Terrain([(0, 0), (2, 5), (4, 0)]), 5, strict=False)
