from gmpy2 import mpq
from hypothesis import given, strategies as st

from altguard.oracle import (
    CriticalSet,
    edge_coverage,
    escalating_lower_bound,
    events_reference,
    greedy_piercing,
    max_disjoint_bruteforce,
    min_piercing_bruteforce,
    piercing_lower_bound,
    uncovered_edges,
    verify_coverage,
)
from altguard.preprocess import EdgeEvents
from altguard.sweep import solve
from altguard.visibility import VisibilityInterval

from conftest import altitude_xs, fixture, generated, terrains


def test_coverage_examples():
    t1, a1 = fixture("T1")
    assert verify_coverage([mpq(5, 2), 8], t1, a1)
    assert not verify_coverage([mpq(5, 2)], t1, a1)
    assert uncovered_edges([mpq(5, 2)], t1, a1) == [3]
    assert verify_coverage([0], *fixture("T0"))


def test_reference_events_examples():
    t1, a1 = fixture("T1")
    ev = events_reference(t1, a1)
    assert ev[1] == EdgeEvents(mpq(3, 2), mpq(3, 2), mpq(13, 2))
    assert ev[2] == EdgeEvents(mpq(0), mpq(3, 2), mpq(13, 2))
    assert events_reference(*fixture("T0")) == [EdgeEvents(mpq(0), mpq(0), mpq(8))]


def test_lower_bound_examples():
    assert piercing_lower_bound(*fixture("T1")) == 2
    assert piercing_lower_bound(*fixture("T1"), refinement=3) == 2
    assert piercing_lower_bound(*fixture("T0")) == 1
    assert piercing_lower_bound(*fixture("TV")) == 1


def test_critical_set_sorted_unique():
    t1, _ = fixture("T1")
    cs = CriticalSet.build(t1, refinement=2)
    for ts in cs.params:
        assert list(ts) == sorted(set(ts))
        assert ts[0] == 0 and ts[-1] == 1


intervals = st.lists(
    st.tuples(st.integers(0, 20), st.integers(0, 6)).map(
        lambda p: VisibilityInterval(mpq(p[0]), mpq(p[0] + p[1]))
    ),
    min_size=1,
    max_size=7,
)


@given(intervals)
def test_greedy_matches_bruteforce(ivs):
    count, stabs = greedy_piercing(ivs)
    assert count == max_disjoint_bruteforce(ivs) == min_piercing_bruteforce(ivs)
    assert all(any(iv.l <= x <= iv.r for x in stabs) for iv in ivs)


@given(terrains(max_n=10), st.data())
def test_horizon_coverage_matches_constraint_coverage(inst, data):
    terrain, altitude = inst
    xs = data.draw(altitude_xs(altitude, 2))
    fast = edge_coverage(xs, terrain, altitude)
    slow = edge_coverage(xs, terrain, altitude, exhaustive=True)
    for a, b in zip(fast, slow):
        assert sorted((r.lo, r.hi) for r in a) == sorted((r.lo, r.hi) for r in b)


@given(generated(max_n=40))
def test_sandwich(inst):
    terrain, altitude = inst
    k = len(solve(terrain, altitude).guards)
    assert piercing_lower_bound(terrain, altitude) <= k
    bound, _ = escalating_lower_bound(terrain, altitude, k)
    assert bound == k


@given(terrains(max_n=6))
def test_small_optimum_by_exhaustion(inst):
    """On tiny terrains no guard set drawn from a fine grid beats the sweep."""
    from itertools import combinations

    terrain, altitude = inst
    k = len(solve(terrain, altitude).guards)
    if k == 1:
        return
    grid = sorted({altitude.x_min + (altitude.x_max - altitude.x_min) * mpq(j, 24) for j in range(25)})
    for combo in combinations(grid, k - 1):
        assert not verify_coverage(combo, terrain, altitude)
