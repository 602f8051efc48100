"""JSON instance and solution files.

Coordinates are written as exact strings ("3", "-7/2"); decimal strings
such as "0.1" are read exactly as 1/10.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from gmpy2 import mpq

from .adapters import Mountain, PolygonError, from_monotone_mountain, from_uni_monotone
from .geom import AltitudeLine, GeometryError, Point, Terrain, coord_str, to_coord
from .sweep import Solution
from .witness import Certificate, Witness

ATGP = "atgp-v1"
POLYGON = "polygon-v1"
SOLUTION = "solution-v1"


class InstanceError(ValueError):
    """Malformed or geometrically invalid instance file."""


@dataclass
class Instance:
    """A parsed instance: always a terrain and altitude line, plus the polygon it came from."""

    terrain: Terrain
    altitude: AltitudeLine
    fmt: str = ATGP
    meta: dict = field(default_factory=dict)
    ring: Optional[list[Point]] = None
    mountain: Optional[Mountain] = None

    def to_place(self, x) -> Point:
        """Where guard position ``x`` sits in the input's own coordinates."""
        p = Point(mpq(x), self.altitude.y)
        if self.mountain is not None:
            return self.mountain.transform.inverse(p)
        return p


def _pt(raw) -> Point:
    if isinstance(raw, dict):
        raw = (raw["x"], raw["y"])
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise InstanceError(f"bad vertex {raw!r}")
    try:
        return Point(to_coord(_num(raw[0])), to_coord(_num(raw[1])))
    except (TypeError, ValueError) as e:
        raise InstanceError(f"bad coordinate in {raw!r}: {e}") from None


def _num(v):
    # JSON numbers: integers stay exact, non-integers go through their text form
    if isinstance(v, bool):
        raise InstanceError("booleans are not coordinates")
    if isinstance(v, float):
        return repr(v)
    return v


def _pts_json(pts) -> list[list[str]]:
    return [[coord_str(p.x), coord_str(p.y)] for p in pts]


def parse_instance(doc: Union[str, dict]) -> Instance:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise InstanceError(f"not JSON: {e}") from None
    if not isinstance(doc, dict):
        raise InstanceError("instance must be a JSON object")
    fmt = doc.get("format")
    meta = dict(doc.get("meta", {}))
    try:
        if fmt == ATGP:
            if "vertices" not in doc or "altitude" not in doc:
                raise InstanceError("atgp-v1 needs 'vertices' and 'altitude'")
            terrain = Terrain([_pt(v) for v in doc["vertices"]])
            altitude = AltitudeLine.over(terrain, to_coord(_num(doc["altitude"])))
            return Instance(terrain, altitude, ATGP, meta)
        if fmt == POLYGON:
            if "ring" not in doc:
                raise InstanceError("polygon-v1 needs 'ring'")
            ring = [_pt(v) for v in doc["ring"]]
            try:
                terrain, altitude, _ = from_uni_monotone(ring)
                return Instance(terrain, altitude, POLYGON, meta, ring)
            except PolygonError:
                terrain, altitude, _, mountain = from_monotone_mountain(ring)
                return Instance(terrain, altitude, POLYGON, meta, ring, mountain)
    except GeometryError as e:
        raise InstanceError(str(e)) from None
    except (TypeError, ValueError) as e:
        if isinstance(e, InstanceError):
            raise
        raise InstanceError(str(e)) from None
    raise InstanceError(f"unknown format {fmt!r}; expected {ATGP!r} or {POLYGON!r}")


def instance_json(inst: Instance) -> dict:
    if inst.fmt == POLYGON:
        doc: dict[str, Any] = {"format": POLYGON, "ring": _pts_json(inst.ring)}
    else:
        doc = {
            "format": ATGP,
            "vertices": _pts_json(inst.terrain.vertices),
            "altitude": coord_str(inst.altitude.y),
        }
    if inst.meta:
        doc["meta"] = inst.meta
    return doc


def atgp_json(terrain: Terrain, altitude: AltitudeLine, **meta) -> dict:
    return instance_json(Instance(terrain, altitude, ATGP, meta))


def solution_json(inst: Instance, solution: Solution, cert: Optional[Certificate] = None) -> dict:
    doc: dict[str, Any] = {
        "format": SOLUTION,
        "guards": [coord_str(g) for g in solution.guards],
        "guard_points": _pts_json(inst.to_place(g) for g in solution.guards),
        "witnesses": [w.as_json() for w in solution.witnesses],
        "trace_digest": solution.trace.digest(),
    }
    if cert is not None:
        for w, p, iv, s in zip(doc["witnesses"], cert.points, cert.intervals, cert.eps_scales):
            w["point"] = [coord_str(p.x), coord_str(p.y)]
            w["interval"] = [coord_str(iv.l), coord_str(iv.r)]
            w["eps_scale"] = coord_str(s)
        doc["certificate"] = cert.flags()
        if cert.notes:
            doc["notes"] = cert.notes
    return doc


@dataclass
class SolutionFile:
    guards: tuple
    witnesses: tuple
    flags: Optional[dict]
    trace_digest: Optional[str]


def parse_solution(doc: Union[str, dict]) -> SolutionFile:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("format") != SOLUTION:
        raise ValueError(f"not a {SOLUTION} document")
    return SolutionFile(
        tuple(mpq(g) for g in doc["guards"]),
        tuple(Witness.from_json(w) for w in doc["witnesses"]),
        doc.get("certificate"),
        doc.get("trace_digest"),
    )
