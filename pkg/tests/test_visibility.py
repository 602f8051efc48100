import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from altguard.geom import GeometryError, Point
from altguard.visibility import ParamRange, VisibilityInterval, sees, visibility_interval, visible_subsegment

from conftest import P, altitude_xs, generated, terrain_points, terrains

TINY = mpq(1, 10**9)


def test_sees_examples(T1, T0):
    t1, _ = T1
    assert not sees(P("2.5", 5), P(8, 0), t1)
    assert sees(P(0, 1), P(8, 0), T0[0])
    assert sees(P("0.5", 5), P(5, 2), t1)  # grazes (2,4)


def test_interval_examples(T1, T0):
    t1, a1 = T1
    assert visibility_interval(P(4, 0), t1, a1) == VisibilityInterval(mpq(3, 2), mpq(13, 2))
    assert visibility_interval(P(8, 0), t1, a1) == VisibilityInterval(mpq(11, 2), mpq(8))
    assert visibility_interval(P(4, 0), *T0) == VisibilityInterval(mpq(0), mpq(8))


def test_interval_rejects_points_off_terrain(T1):
    with pytest.raises(GeometryError):
        visibility_interval(P(4, 1), *T1)


def test_subsegment_examples(T1, T0):
    t1, _ = T1
    r = visible_subsegment(P("2.5", 5), t1, 3)
    assert (r.lo, r.hi) == (0, 0)
    r = visible_subsegment(P(0, 1), T0[0], 0)
    assert (r.lo, r.hi) == (0, 1)
    r = visible_subsegment(P(8, 5), t1, 3)
    assert (r.lo, r.hi) == (0, 1)


def test_subsegment_half_open():
    r = ParamRange(mpq(0), mpq(1, 2), hi_closed=False)
    assert mpq(1, 4) in r and mpq(1, 2) not in r


@st.composite
def point_and_three(draw):
    terrain, altitude = draw(terrains())
    p = draw(terrain_points(terrain))
    xs = draw(altitude_xs(altitude, 3))
    return terrain, altitude, p, xs


@given(point_and_three())
def test_interval_property(case):
    terrain, altitude, p, (a1, a2, a3) = case
    see = [sees(altitude.point(x), p, terrain) for x in (a1, a2, a3)]
    if see[0] and see[2]:
        assert see[1]


@given(point_and_three())
def test_no_help_both_sides(case):
    terrain, altitude, p, xs = case
    left = [x for x in xs if x < p.x]
    right = [x for x in xs if x > p.x]
    # a guard further out on the same side cannot see what a nearer one misses
    for near, far in ((left[-1:], left[:-1]), (right[:1], right[1:])):
        for g in near:
            if not sees(altitude.point(g), p, terrain):
                assert not any(sees(altitude.point(f), p, terrain) for f in far)


@given(generated(max_n=25), st.data())
def test_interval_matches_sees(inst, data):
    terrain, altitude = inst
    p = data.draw(terrain_points(terrain))
    iv = visibility_interval(p, terrain, altitude)
    assert iv.l <= p.x <= iv.r
    assert altitude.x_min <= iv.l and iv.r <= altitude.x_max
    assert sees(altitude.point(iv.l), p, terrain)
    assert sees(altitude.point(iv.r), p, terrain)
    if iv.l > altitude.x_min:
        assert not sees(altitude.point(iv.l - TINY), p, terrain)
    if iv.r < altitude.x_max:
        assert not sees(altitude.point(iv.r + TINY), p, terrain)
    for x in data.draw(altitude_xs(altitude, 4)):
        assert sees(altitude.point(x), p, terrain) == (x in iv)


@settings(max_examples=25)
@given(terrains(max_n=10), st.data())
def test_subsegment_agrees_with_sees(inst, data):
    terrain, altitude = inst
    (x,) = data.draw(altitude_xs(altitude, 1))
    g = altitude.point(x)
    for i in range(terrain.n_edges):
        r = visible_subsegment(g, terrain, i)
        for k in range(100):
            t = mpq(k, 99)
            assert sees(g, terrain.point_on_edge(i, t), terrain) == (r is not None and t in r)
