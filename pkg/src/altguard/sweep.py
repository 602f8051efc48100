"""Left-to-right sweep along the altitude line placing guards at closing events."""
from __future__ import annotations

import heapq
import json
from bisect import bisect_right
from dataclasses import dataclass, field
from hashlib import sha256
from typing import Optional

from gmpy2 import mpq
from sortedcontainers import SortedList

from .geom import AltitudeLine, Coord, Point, Terrain, coord_str, cross
from .preprocess import (
    EdgeEvents,
    MarkTable,
    closing_of_interval,
    closing_reference,
    edge_events,
    marks_convex_hull,
    vertex_intervals,
)

ONE = mpq(1)


class SweepInvariantError(AssertionError):
    """The sweep reached a state its correctness argument rules out."""

    def __init__(self, message: str, trace: Optional["Trace"] = None):
        if trace is not None:
            message = f"{message}\n--- trace ---\n{trace.dump()}"
        super().__init__(message)
        self.trace = trace


class ReplayError(ValueError):
    pass


@dataclass(frozen=True)
class SubEdge:
    """Still-unseen prefix ``[v_edge, q)`` of an edge, ``q`` at parameter ``t_end``.

    ``whole`` means the closed edge including its right endpoint.
    """

    edge: int
    t_end: Coord = ONE
    whole: bool = True

    def as_json(self) -> dict:
        return {"edge": self.edge, "t_end": coord_str(self.t_end), "whole": self.whole}

    @classmethod
    def from_json(cls, d: dict) -> "SubEdge":
        return cls(int(d["edge"]), mpq(d["t_end"]), bool(d["whole"]))


@dataclass(frozen=True)
class Action:
    edge: int
    kind: str  # "delete" | "split" | "keep"
    t_end: Optional[Coord] = None
    closing: Optional[Coord] = None


@dataclass(frozen=True)
class TraceEvent:
    x: Coord
    triggers: tuple[SubEdge, ...]
    actions: tuple[Action, ...]


@dataclass
class Trace:
    terrain: Terrain
    altitude: AltitudeLine
    initial: tuple[EdgeEvents, ...]
    events: list[TraceEvent] = field(default_factory=list)

    def as_json(self) -> dict:
        def act(a: Action) -> dict:
            d = {"edge": a.edge, "kind": a.kind}
            if a.t_end is not None:
                d["t_end"] = coord_str(a.t_end)
            if a.closing is not None:
                d["closing"] = coord_str(a.closing)
            return d

        return {
            "closings": [coord_str(e.c) for e in self.initial],
            "events": [
                {
                    "x": coord_str(ev.x),
                    "triggers": [s.as_json() for s in ev.triggers],
                    "actions": [act(a) for a in ev.actions],
                }
                for ev in self.events
            ],
        }

    def dump(self) -> str:
        return json.dumps(self.as_json(), indent=1)

    def digest(self) -> str:
        return sha256(json.dumps(self.as_json(), sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class Solution:
    guards: tuple[Coord, ...]
    witnesses: tuple  # tuple[witness.Witness, ...]
    trace: Trace

    def guard_points(self) -> list[Point]:
        y = self.trace.altitude.y
        return [Point(x, y) for x in self.guards]


def _steeper(num1, den1, num2, den2) -> bool:
    """num1/den1 > num2/den2 for positive denominators."""
    return num1 * den2 > num2 * den1


class _Sweep:
    def __init__(self, terrain: Terrain, altitude: AltitudeLine, check: bool):
        self.T = terrain
        self.A = altitude
        self.check = check
        self.intervals = vertex_intervals(terrain, altitude)
        self.events = edge_events(terrain, altitude, intervals=self.intervals)
        self.marks: MarkTable = marks_convex_hull(terrain)
        self.trace = Trace(terrain, altitude, tuple(self.events))
        self.live: dict[int, SubEdge] = {}
        self.closing: dict[int, Coord] = {}
        self.queue = SortedList()
        self.dormant: list[tuple[Coord, int]] = []
        self.active: set[int] = set()
        for i, ev in enumerate(self.events):
            self.live[i] = SubEdge(i)
            self.closing[i] = ev.c
            self.queue.add((ev.c, i))
            self.dormant.append((ev.s, i))
        heapq.heapify(self.dormant)

    def fail(self, message: str):
        raise SweepInvariantError(message, self.trace)

    def run(self) -> tuple[list[Coord], list[tuple[SubEdge, ...]]]:
        guards: list[Coord] = []
        contexts: list[tuple[SubEdge, ...]] = []
        while self.live:
            g = self.queue[0][0]
            if guards and g <= guards[-1]:
                self.fail(f"event {g} does not advance past guard {guards[-1]}")
            triggers = []
            for c, i in self.queue:
                if c != g:
                    break
                triggers.append(self.live[i])
            while self.dormant and self.dormant[0][0] <= g:
                self.active.add(heapq.heappop(self.dormant)[1])
            actions = self.place(g)
            for s in triggers:
                if s.edge in self.live:
                    self.fail(f"guard at {g} failed to clear its own trigger {s}")
            guards.append(g)
            contexts.append(tuple(triggers))
            self.trace.events.append(TraceEvent(g, tuple(triggers), tuple(actions)))
        return guards, contexts

    def place(self, g: Coord) -> list[Action]:
        T, verts, xs = self.T, self.T.vertices, self.T.xs
        gp = Point(g, self.A.y)
        actions = []
        k = bisect_right(xs, g)
        best = None  # (num, den, vertex) of the steepest sightline so far
        for i in sorted(self.active):
            sub = self.live[i]
            c = self.closing[i]
            if g > c:
                self.fail(f"guard {g} lies right of closing {c} of {sub}")
            a, b = verts[i], verts[i + 1]
            if sub.whole:
                ev = self.events[i]
                if ev.o <= g:
                    actions.append(self.delete(i))
                    continue
            elif a.x <= g:
                actions.append(self.delete(i))
                continue
            while k < i:
                v = verts[k]
                num, den = v.y - gp.y, v.x - gp.x
                if best is None or _steeper(num, den, best[0], best[1]):
                    best = (num, den, v)
                k += 1
            va_num, va_den = a.y - gp.y, a.x - gp.x
            vb_num, vb_den = b.y - gp.y, b.x - gp.x
            front = not _steeper(va_num, va_den, vb_num, vb_den)
            if not front:
                if sub.whole:
                    self.fail(f"guard {g} past the soft opening of edge {i} cannot see it")
                actions.append(Action(i, "keep"))
                continue
            if best is None or not _steeper(best[0], best[1], va_num, va_den):
                if sub.whole:
                    self.fail(f"guard {g} sees all of edge {i} but lies left of its opening")
                actions.append(self.delete(i))
                continue
            w = best[2]
            fa, fb = cross(gp, w, a), cross(gp, w, b)
            if fb < 0:
                if sub.whole:
                    self.fail(f"guard {g} past the soft opening of edge {i} cannot see its right end")
                actions.append(Action(i, "keep"))
                continue
            t_star = fa / (fa - fb)
            if t_star >= sub.t_end and not sub.whole:
                actions.append(Action(i, "keep"))
                continue
            actions.append(self.split(i, t_star, g))
        return actions

    def delete(self, i: int) -> Action:
        self.queue.remove((self.closing[i], i))
        del self.live[i]
        del self.closing[i]
        self.active.discard(i)
        return Action(i, "delete")

    def split(self, i: int, t_end: Coord, g: Coord) -> Action:
        c_new = closing_of_interval(
            self.T, self.A, i, t_end, self.marks, check=self.check,
            left_r=self.intervals[i].r,
        )
        if c_new <= g:
            self.fail(f"split of edge {i} at t={t_end} closes at {c_new} <= guard {g}")
        self.queue.remove((self.closing[i], i))
        self.queue.add((c_new, i))
        self.closing[i] = c_new
        self.live[i] = SubEdge(i, t_end, whole=False)
        return Action(i, "split", t_end, c_new)

    def verify_state(self):
        """Recompute the closing of every live sub-edge from scratch."""
        for i, sub in self.live.items():
            if sub.whole:
                expect = self.events[i].c
            else:
                expect = closing_reference(self.T, self.A, i, sub.t_end, self.marks)
            if expect != self.closing[i]:
                self.fail(f"incremental closing {self.closing[i]} != recomputed {expect} for {sub}")


def solve(terrain: Terrain, altitude: AltitudeLine, check: bool = False) -> Solution:
    """Minimum guard set on the altitude line, with one witness per guard.

    ``check`` cross-validates every single-ray closing against the reference
    minimization and re-derives the live closings after each guard.
    """
    from .witness import place_witness

    sweep = _Sweep(terrain, altitude, check)
    if check:
        orig_place = sweep.place

        def checked(g):
            out = orig_place(g)
            sweep.verify_state()
            return out

        sweep.place = checked
    guards, contexts = sweep.run()
    witnesses = []
    prev = None
    for g, ctx in zip(guards, contexts):
        witnesses.append(place_witness(terrain, altitude, g, ctx, sweep.marks, prev, sweep.intervals))
        prev = g
    return Solution(tuple(guards), tuple(witnesses), sweep.trace)


def replay(trace: Trace) -> Solution:
    """Re-execute a recorded trace, validating every step, and rebuild the Solution."""
    from .witness import place_witness

    n_edges = trace.terrain.n_edges
    if len(trace.initial) != n_edges:
        raise ReplayError("trace does not match the terrain's edge count")
    live = {i: SubEdge(i) for i in range(n_edges)}
    closing = {i: trace.initial[i].c for i in range(n_edges)}
    guards: list[Coord] = []
    for ev in trace.events:
        if not live:
            raise ReplayError("trace continues after every edge was guarded")
        due = sorted(i for i, c in closing.items() if c == ev.x)
        if min(closing.values()) != ev.x or [s.edge for s in ev.triggers] != due:
            raise ReplayError(f"event at {ev.x} is not the next closing event")
        for s in ev.triggers:
            if live.get(s.edge) != s:
                raise ReplayError(f"trigger {s} is not live")
        for a in ev.actions:
            if a.edge not in live:
                raise ReplayError(f"action on dead edge {a.edge}")
            if a.kind == "delete":
                del live[a.edge]
                del closing[a.edge]
            elif a.kind == "split":
                if a.t_end is None or a.closing is None or a.closing <= ev.x:
                    raise ReplayError(f"malformed split of edge {a.edge}")
                live[a.edge] = SubEdge(a.edge, a.t_end, whole=False)
                closing[a.edge] = a.closing
            elif a.kind != "keep":
                raise ReplayError(f"unknown action {a.kind!r}")
        for s in ev.triggers:
            if s.edge in live:
                raise ReplayError(f"trigger {s} survived its own guard")
        guards.append(ev.x)
    if live:
        raise ReplayError(f"trace ends with {len(live)} unguarded sub-edges")
    marks = marks_convex_hull(trace.terrain)
    intervals = vertex_intervals(trace.terrain, trace.altitude)
    witnesses = []
    prev = None
    for g, ev in zip(guards, trace.events):
        witnesses.append(place_witness(trace.terrain, trace.altitude, g, ev.triggers, marks, prev, intervals))
        prev = g
    return Solution(tuple(guards), tuple(witnesses), trace)


def truncated(trace: Trace, keep: int) -> Trace:
    """Copy of ``trace`` holding only its first ``keep`` events."""
    return Trace(trace.terrain, trace.altitude, trace.initial, list(trace.events[:keep]))
