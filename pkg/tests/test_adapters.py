import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from altguard.adapters import (
    MountainTransform,
    PolygonError,
    UniMonotonePolygon,
    check_mountain_solution,
    from_monotone_mountain,
    from_uni_monotone,
    project_guard_to_H,
    random_mountain,
    random_uni_monotone,
)
from altguard.generate import PROFILES
from altguard.geom import Point
from altguard.sweep import solve
from altguard.witness import certify

from conftest import P, fixture

T1_POLY = [(0, 5), (8, 5), (8, 0), (6, 4), (4, 0), (2, 4), (0, 0)]


def test_t1_polygon_is_t1():
    terrain, altitude, back = from_uni_monotone(T1_POLY)
    t1, a1 = fixture("T1")
    assert terrain == t1 and altitude.y == a1.y
    assert back(mpq(5, 2)) == P("2.5", 5)


def test_rectangle():
    terrain, altitude, _ = from_uni_monotone([(0, 0), (8, 0), (8, 1), (0, 1)])
    assert terrain == fixture("T0")[0] and altitude.y == 1
    assert len(solve(terrain, altitude).guards) == 1


def test_orientation_insensitive():
    a = from_uni_monotone(T1_POLY)[0]
    b = from_uni_monotone(list(reversed(T1_POLY)))[0]
    assert a == b


@pytest.mark.parametrize("ring,reason", [
    ([(0, 5), (8, 5), (8, 0), (3, 2), (5, 1), (0, 0)], "not strictly x-monotone"),
    ([(0, 0), (4, 6), (8, 0)], "horizontal edge"),
    ([(0, 5), (8, 5), (6, 5), (4, 0), (0, 0)], "folds back"),
])
def test_rejects_non_uni_monotone(ring, reason):
    with pytest.raises(PolygonError, match=reason):
        from_uni_monotone(ring)


def test_shared_corners_allowed():
    terrain, altitude, _ = from_uni_monotone([(0, 5), (3, 1), (6, 2), (8, 5)])
    assert altitude.y == 5 and terrain.vertices[0] == P(0, 5)
    sol = solve(terrain, altitude)
    assert certify(sol, terrain, altitude).valid


def test_projection_examples():
    assert project_guard_to_H(T1_POLY, P("2.5", 3)) == P("2.5", 5)
    assert project_guard_to_H(T1_POLY, P(3, 5)) == P(3, 5)
    with pytest.raises(PolygonError):
        project_guard_to_H(T1_POLY, P(2, 6))
    with pytest.raises(PolygonError):
        project_guard_to_H(T1_POLY, P(4, -1))


def test_projection_sees_what_original_sees():
    poly = UniMonotonePolygon.from_ring(T1_POLY)
    g = P(4, "0.5")
    h = project_guard_to_H(poly, g)
    assert poly.sees(g, P(3, 2)) and poly.sees(h, P(3, 2))


def test_rotated_t1_mountain():
    tf = MountainTransform.for_base(P(0, 0), P(1, 1))
    assert tf.forward(P(1, 1)) == P(2, 0)
    ring = [tf.inverse(Point.of(*p)) for p in T1_POLY]
    terrain, altitude, back, m = from_monotone_mountain(ring)
    sol = solve(terrain, altitude)
    assert len(sol.guards) == 2
    base_a, base_b = m.base
    for g in sol.guards:
        p = back(g)
        # on the tilted base segment
        assert (p.x - base_a.x) * (base_b.y - base_a.y) == (p.y - base_a.y) * (base_b.x - base_a.x)
    assert check_mountain_solution(m, sol, certify(sol, terrain, altitude)).valid


def test_axis_aligned_mountain_is_identity():
    t_u, a_u, _ = from_uni_monotone(T1_POLY)
    t_m, a_m, back, m = from_monotone_mountain(T1_POLY)
    assert (t_u, a_u) == (t_m, a_m)
    assert m.transform.forward(P(3, 7)) == P(3, 7)
    assert back(mpq(5, 2)) == P("2.5", 5)


def test_degenerate_base():
    with pytest.raises(PolygonError):
        from_monotone_mountain([(0, 0), (0, 0), (1, 1)])
    with pytest.raises(PolygonError):
        MountainTransform.for_base(P(1, 1), P(1, 1))


@given(st.integers(3, 30), st.integers(0, 10**5), st.sampled_from(PROFILES))
def test_mountain_round_trip(n, seed, profile):
    ring = random_mountain(n, seed, profile)
    _, _, _, m = from_monotone_mountain(ring)
    tf = m.transform
    assert all(tf.inverse(tf.forward(p)) == p for p in m.ring)
    a, b = m.base
    assert tf.forward(a).y == tf.forward(b).y


def _interior_points(poly, rng, k):
    lo, hi = poly.lower.x_min, poly.lower.x_max
    out = []
    while len(out) < k:
        x = lo + (hi - lo) * mpq(rng.randint(0, 997), 997)
        floor = poly.lower.height_at(x)
        y = floor + (poly.h_y - floor) * mpq(rng.randint(0, 991), 991)
        out.append(Point(x, y))
    return out


@given(st.integers(3, 25), st.integers(0, 10**5), st.booleans())
def test_projection_to_top_small(n, seed, vertical):
    poly = random_uni_monotone(n, seed, vertical_ends=vertical)
    rng = random.Random(seed)
    for g in _interior_points(poly, rng, 20):
        h = project_guard_to_H(poly, g)
        for v in poly.lower.vertices:
            if poly.sees(g, v):
                assert poly.sees(h, v)


@given(st.integers(3, 25), st.integers(0, 10**5))
def test_interior_coverage_small(n, seed):
    poly = random_uni_monotone(n, seed)
    terrain, altitude, back = from_uni_monotone(poly)
    guards = [back(g) for g in solve(terrain, altitude).guards]
    rng = random.Random(seed)
    for z in _interior_points(poly, rng, 30):
        assert any(poly.sees(g, z) for g in guards)
