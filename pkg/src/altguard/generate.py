"""Seeded random terrains."""
from __future__ import annotations

import random
from typing import Optional

from gmpy2 import mpq

from .geom import AltitudeLine, CoordLike, Point, Terrain, cross, to_coord

PROFILES = ("peaks", "plateau", "sawtooth", "random-walk")


def _heights(profile: str, n: int, rng: random.Random) -> list[int]:
    if profile == "peaks":
        return [rng.randint(6, 20) if k % 2 else rng.randint(0, 5) for k in range(n)]
    if profile == "plateau":
        levels = [0, 8, 16]
        out, level = [], rng.choice(levels)
        for _ in range(n):
            if rng.random() < 0.2:
                level = rng.choice(levels)
            out.append(level + rng.randint(-1, 1))
        return out
    if profile == "sawtooth":
        amp = rng.randint(3, 12)
        return [(amp if k % 2 else 0) + rng.randint(-1, 1) for k in range(n)]
    if profile == "random-walk":
        out, y = [], 0
        for _ in range(n):
            out.append(y)
            y += rng.randint(-6, 6)
        return out
    raise ValueError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}")


def random_terrain(n: int, seed: int, profile: str = "random-walk") -> Terrain:
    """Terrain with exactly ``n`` integer vertices and no collinear consecutive triple."""
    if n < 2:
        raise ValueError("a terrain needs n >= 2 vertices")
    rng = random.Random(f"{profile}:{n}:{seed}")
    ys = _heights(profile, n, rng)
    pts: list[Point] = []
    x = 0
    for y in ys:
        pt = Point(mpq(x), mpq(y))
        while len(pts) >= 2 and cross(pts[-2], pts[-1], pt) == 0:
            pt = Point(pt.x, pt.y + rng.choice((-1, 1)))
        pts.append(pt)
        x += rng.randint(1, 4)
    terrain = Terrain(pts)
    assert terrain.n == n
    return terrain


def random_instance(
    n: int,
    seed: int,
    profile: str = "random-walk",
    margin: Optional[CoordLike] = None,
) -> tuple[Terrain, AltitudeLine]:
    """Terrain plus altitude line ``margin`` above its highest vertex.

    Without an explicit margin one is drawn from the seed.
    """
    terrain = random_terrain(n, seed, profile)
    if margin is None:
        rng = random.Random(f"margin:{profile}:{n}:{seed}")
        margin = rng.choice([mpq(1, 2), mpq(1), mpq(2), mpq(5), mpq(20)])
    margin = to_coord(margin)
    if margin <= 0:
        raise ValueError("altitude margin must be positive")
    return terrain, AltitudeLine.over(terrain, terrain.max_y() + margin)
