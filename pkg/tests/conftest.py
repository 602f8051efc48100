import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings, strategies as st

from altguard.generate import PROFILES, random_instance
from altguard.geom import AltitudeLine, Point, Terrain

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

FIXTURES = {
    "T0": ([(0, 0), (8, 0)], 1),
    "TV": ([(0, 2), (2, 0), (4, 2)], 3),
    "T1": ([(0, 0), (2, 4), (4, 0), (6, 4), (8, 0)], 5),
}


def fixture(name):
    verts, y = FIXTURES[name]
    t = Terrain(verts)
    return t, AltitudeLine.over(t, y)


@pytest.fixture
def T0():
    return fixture("T0")


@pytest.fixture
def TV():
    return fixture("TV")


@pytest.fixture
def T1():
    return fixture("T1")


@st.composite
def terrains(draw, min_n=2, max_n=12, lo=-8, hi=8):
    """Small integer terrains plus an altitude strictly above them."""
    n = draw(st.integers(min_n, max_n))
    gaps = draw(st.lists(st.integers(1, 4), min_size=n - 1, max_size=n - 1))
    ys = draw(st.lists(st.integers(lo, hi), min_size=n, max_size=n))
    xs = [0]
    for g in gaps:
        xs.append(xs[-1] + g)
    terrain = Terrain(list(zip(xs, ys)))
    margin = draw(st.sampled_from([mpq(1, 3), mpq(1), mpq(3), mpq(12)]))
    return terrain, AltitudeLine.over(terrain, terrain.max_y() + margin)


@st.composite
def generated(draw, max_n=40):
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 10**6))
    profile = draw(st.sampled_from(PROFILES))
    return random_instance(n, seed, profile)


@st.composite
def terrain_points(draw, terrain):
    """A point on the terrain with a small-denominator parameter."""
    i = draw(st.integers(0, terrain.n_edges - 1))
    t = mpq(draw(st.integers(0, 12)), 12)
    return terrain.point_on_edge(i, t)


@st.composite
def altitude_xs(draw, altitude, k=1):
    den = 24
    lo = int(altitude.x_min * den)
    hi = int(altitude.x_max * den)
    return sorted(mpq(draw(st.integers(lo, hi)), den) for _ in range(k))


def P(x, y):
    return Point.of(x, y)
