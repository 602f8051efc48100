"""One witness per guard, and the certificate that proves the guard set minimum.

Witnesses with pairwise disjoint visibility intervals force any feasible
guard set to have at least as many guards as there are witnesses.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence

from gmpy2 import mpq

from .geom import AltitudeLine, Coord, Point, Terrain, coord_str
from .preprocess import MarkTable
from .visibility import VisibilityInterval, visibility_interval

if TYPE_CHECKING:
    from .sweep import Solution, SubEdge

HALF = mpq(1, 2)
MAX_HALVINGS = 256


class WitnessKind(str, enum.Enum):
    VERTEX = "vertex"
    MARK = "mark"
    EPS_LEFT = "eps-left"


@dataclass(frozen=True)
class Witness:
    """Symbolic witness on edge ``edge``.

    VERTEX sits at parameter ``t`` (0 or 1), MARK at a mark parameter. EPS_LEFT sits just left of the
    split boundary ``t``; ``floor`` is the nearest critical parameter to its
    left and ``rule`` names the placement rule that produced it.
    """

    kind: WitnessKind
    edge: int
    t: Coord
    floor: Coord = mpq(0)
    rule: str = "convex-reflex"

    def param(self, eps_scale: Coord = HALF) -> Coord:
        if self.kind is not WitnessKind.EPS_LEFT:
            return self.t
        return self.t - (self.t - self.floor) * eps_scale

    def realize(self, terrain: Terrain, eps_scale: Coord = HALF) -> Point:
        return terrain.point_on_edge(self.edge, self.param(eps_scale))

    def as_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "edge": self.edge,
            "t": coord_str(self.t),
            "floor": coord_str(self.floor),
            "rule": self.rule,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Witness":
        return cls(WitnessKind(d["kind"]), int(d["edge"]), mpq(d["t"]), mpq(d["floor"]), d["rule"])


class EmptyContext(ValueError):
    pass


def _fits(iv: VisibilityInterval, g: Coord, prev_guard: Optional[Coord]) -> bool:
    return iv.r == g and (prev_guard is None or iv.l > prev_guard)


def place_witness(
    terrain: Terrain,
    altitude: AltitudeLine,
    g: Coord,
    triggers: Sequence["SubEdge"],
    marks: MarkTable,
    prev_guard: Optional[Coord] = None,
    intervals: Optional[Sequence[VisibilityInterval]] = None,
) -> Witness:
    """Witness for the guard ``g`` placed at one closing event.

    A whole triggering edge yields the convex left vertex of the rightmost
    convex-to-reflex edge. When no edge has that shape the rightmost whole
    edge supplies the witness: its left vertex if convex and unseen by the
    previous guard, else its right endpoint. Only split triggers yield a
    point just left of the rightmost split boundary.

    Every candidate must see ``g`` as the right end of its interval and stay
    unseen by ``prev_guard``; a candidate failing that is replaced by the
    first fitting point found among the triggers' vertices, marks and split
    boundaries.
    """
    if not triggers:
        raise EmptyContext("a guard event needs at least one triggering sub-edge")

    def iv_vertex(k: int) -> VisibilityInterval:
        if intervals is not None:
            return intervals[k]
        return visibility_interval(terrain.vertices[k], terrain, altitude)

    def vertex_fits(w: Witness) -> bool:
        return _fits(iv_vertex(w.edge + int(w.t)), g, prev_guard)

    def eps_fits(w: Witness) -> bool:
        q = terrain.point_on_edge(w.edge, w.t)
        return visibility_interval(q, terrain, altitude).r == g

    wholes = [s for s in triggers if s.whole]
    if wholes:
        first = None
        for s in sorted(wholes, key=lambda s: s.edge, reverse=True):
            if terrain.is_convex(s.edge) and terrain.is_reflex(s.edge + 1):
                first = Witness(WitnessKind.VERTEX, s.edge, mpq(0))
                break
        if first is None:
            last = max(wholes, key=lambda s: s.edge).edge
            t = mpq(0) if terrain.is_convex(last) and (
                prev_guard is None or iv_vertex(last).l > prev_guard
            ) else mpq(1)
            first = Witness(WitnessKind.VERTEX, last, t, rule="boundary")
        if vertex_fits(first):
            return first
    else:
        s = max(triggers, key=lambda s: s.edge)
        first = _eps_witness(s.edge, s.t_end, marks)
        if eps_fits(first):
            return first
    found = _search(terrain, altitude, g, triggers, marks, prev_guard, iv_vertex, eps_fits)
    if found is None:
        # nothing fits; hand back the rule's choice and let the certifier reject it
        return first
    return found


def _eps_witness(edge: int, t_end: Coord, marks: MarkTable, rule: str = "convex-reflex") -> Witness:
    floor = max((m.t for m in marks.get(edge, ()) if m.t < t_end), default=mpq(0))
    return Witness(WitnessKind.EPS_LEFT, edge, t_end, floor, rule)


def _search(terrain, altitude, g, triggers, marks, prev_guard, iv_vertex, eps_fits):
    for s in sorted(triggers, key=lambda s: s.edge, reverse=True):
        ends = (0, 1) if s.whole else (0,)
        for t in ends:
            if _fits(iv_vertex(s.edge + t), g, prev_guard):
                return Witness(WitnessKind.VERTEX, s.edge, mpq(t), rule="search")
        for m in marks.get(s.edge, ()):
            if 0 < m.t < s.t_end or (s.whole and 0 < m.t < 1):
                iv = visibility_interval(m.point(terrain), terrain, altitude)
                if _fits(iv, g, prev_guard):
                    return Witness(WitnessKind.MARK, s.edge, m.t, rule="search")
        if not s.whole:
            w = _eps_witness(s.edge, s.t_end, marks, rule="search")
            if eps_fits(w):
                return w
    return None


@dataclass
class Certificate:
    guards: tuple[Coord, ...]
    witnesses: tuple[Witness, ...]
    points: tuple[Point, ...]
    intervals: tuple[VisibilityInterval, ...]
    eps_scales: tuple[Coord, ...]
    counts_match: bool
    pairwise_disjoint: bool
    coverage_ok: bool
    strip_ok: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.counts_match and self.pairwise_disjoint and self.coverage_ok

    def flags(self) -> dict:
        return {
            "counts_match": self.counts_match,
            "pairwise_disjoint": self.pairwise_disjoint,
            "coverage_ok": self.coverage_ok,
            "valid": self.valid,
        }


def guards_in(iv: VisibilityInterval, guards: Sequence[Coord]) -> list[int]:
    return [k for k, g in enumerate(guards) if iv.l <= g <= iv.r]


def pairwise_disjoint(intervals: Sequence[VisibilityInterval]) -> bool:
    ordered = sorted(intervals, key=lambda iv: (iv.l, iv.r))
    return all(a.r < b.l for a, b in zip(ordered, ordered[1:]))


def realize_witnesses(
    witnesses: Sequence[Witness],
    guards: Sequence[Coord],
    terrain: Terrain,
    altitude: AltitudeLine,
) -> tuple[list[Point], list[VisibilityInterval], list[Coord]]:
    """Concrete points for every witness, shrinking epsilons until neighbours separate.

    Vertex witnesses are fixed. An EPS_LEFT witness starts halfway between its
    floor and its boundary and halves the gap while its interval reaches a
    guard other than its own or overlaps the next witness interval.
    """
    scales = [HALF] * len(witnesses)
    pts = [w.realize(terrain, HALF) for w in witnesses]
    ivs = [visibility_interval(p, terrain, altitude) for p in pts]
    for _ in range(MAX_HALVINGS):
        changed = False
        # right to left: an EPS point only ever needs to pull its right end back
        for i in range(len(witnesses) - 1, -1, -1):
            w = witnesses[i]
            if w.kind is not WitnessKind.EPS_LEFT:
                continue
            bad = i < len(guards) and guards_in(ivs[i], guards) != [i]
            if i + 1 < len(ivs) and not ivs[i].disjoint(ivs[i + 1]):
                bad = True
            if bad:
                scales[i] = scales[i] * HALF
                pts[i] = w.realize(terrain, scales[i])
                ivs[i] = visibility_interval(pts[i], terrain, altitude)
                changed = True
        if not changed:
            break
    return pts, ivs, scales


def certify(solution: "Solution", terrain: Terrain, altitude: AltitudeLine) -> Certificate:
    """Check |W| = |G|, pairwise disjoint witness intervals, and coverage."""
    from .oracle import verify_coverage

    guards = solution.guards
    witnesses = solution.witnesses
    pts, ivs, scales = realize_witnesses(witnesses, guards, terrain, altitude)
    notes = []
    strip_ok = True
    for i, iv in enumerate(ivs):
        hit = guards_in(iv, guards)
        if hit != [i]:
            strip_ok = False
            notes.append(f"witness {i} sees guards {hit}")
    return Certificate(
        guards=tuple(guards),
        witnesses=tuple(witnesses),
        points=tuple(pts),
        intervals=tuple(ivs),
        eps_scales=tuple(scales),
        counts_match=len(witnesses) == len(guards),
        pairwise_disjoint=pairwise_disjoint(ivs),
        coverage_ok=verify_coverage(guards, terrain, altitude),
        strip_ok=strip_ok,
        notes=notes,
    )


def verdict_at(
    witnesses: Sequence[Witness],
    scales: Sequence[Coord],
    terrain: Terrain,
    altitude: AltitudeLine,
) -> bool:
    """Disjointness verdict for an explicit choice of epsilon scales."""
    ivs = [
        visibility_interval(w.realize(terrain, s), terrain, altitude)
        for w, s in zip(witnesses, scales)
    ]
    return pairwise_disjoint(ivs)
