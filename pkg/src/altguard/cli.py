"""Command line: solve, verify, gen, profile, bench."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from gmpy2 import mpq

from .adapters import check_mountain_solution
from .formats import (
    Instance,
    InstanceError,
    atgp_json,
    parse_instance,
    parse_solution,
    solution_json,
)
from .generate import PROFILES, random_instance
from .geom import AltitudeLine, GeometryError, Terrain, coord_str, to_coord
from .render import render_svg
from .sweep import Solution, SweepInvariantError, solve
from .witness import certify

log = logging.getLogger("altguard")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNCERTIFIED = 3


class CliFailure(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.payload = {"error": kind, "message": message, **extra}


def profile_altitudes(terrain: Terrain, heights: Sequence) -> list[tuple]:
    """Minimum guard count at each sampled altitude (no monotonicity assumed)."""
    rows = []
    for h in heights:
        y = to_coord(h)
        try:
            altitude = AltitudeLine.over(terrain, y)
        except GeometryError:
            raise GeometryError(f"height {coord_str(y)} is not above the terrain") from None
        rows.append((y, len(solve(terrain, altitude).guards)))
    return rows


@dataclass
class BenchRow:
    n: int
    seconds: float
    guards: int


def bench(sizes: Sequence[int], seed: int = 0, profile: str = "random-walk") -> list[BenchRow]:
    rows = []
    for n in sizes:
        terrain, altitude = random_instance(n, seed, profile)
        t0 = time.perf_counter()
        sol = solve(terrain, altitude)
        rows.append(BenchRow(n, time.perf_counter() - t0, len(sol.guards)))
    return rows


def doubling_ratios(rows: Sequence[BenchRow]) -> list[float]:
    """Time ratio between consecutive sizes, normalized to a doubling."""
    import math

    out = []
    for a, b in zip(rows, rows[1:]):
        steps = math.log2(b.n / a.n)
        out.append((b.seconds / max(a.seconds, 1e-9)) ** (1 / steps))
    return out


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load(path: str) -> Instance:
    try:
        return parse_instance(_read(path))
    except OSError as e:
        raise CliFailure(EXIT_INVALID, "io", str(e), path=path)
    except InstanceError as e:
        raise CliFailure(EXIT_INVALID, "invalid-instance", str(e), path=path)


def _emit(doc, out: Optional[str]):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _certify_instance(inst: Instance, sol):
    cert = certify(sol, inst.terrain, inst.altitude)
    ok = cert.valid
    if ok and inst.mountain is not None:
        ok = check_mountain_solution(inst.mountain, sol, cert).valid
    return cert, ok


def _solve_one(path: str, check: bool):
    inst = _load(path)
    sol = solve(inst.terrain, inst.altitude, check=check)
    return inst, sol


def cmd_solve(args) -> int:
    results = []
    if len(args.instances) > 1 and args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_solve_one, args.instances, [args.check] * len(args.instances)))
    else:
        results = [_solve_one(p, args.check) for p in args.instances]
    code = EXIT_OK
    docs = []
    for path, (inst, sol) in zip(args.instances, results):
        cert = None
        ok = True
        if args.certify or args.render:
            cert, ok = _certify_instance(inst, sol)
        doc = solution_json(inst, sol, cert)
        docs.append(doc)
        log.info("%s: %d guards", path, len(sol.guards))
        if args.render:
            with open(args.render, "w") as fh:
                fh.write(render_svg(inst.terrain, inst.altitude, sol, cert, events=args.events))
        if args.certify and not ok:
            code = EXIT_UNCERTIFIED
            sys.stderr.write(json.dumps({"error": "certification-failed", "path": path,
                                         "flags": cert.flags(), "notes": cert.notes}) + "\n")
    _emit(docs[0] if len(docs) == 1 else docs, args.out)
    return code


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    try:
        sf = parse_solution(_read(args.solution))
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise CliFailure(EXIT_INVALID, "invalid-solution", str(e), path=args.solution)
    sol = solve(inst.terrain, inst.altitude)
    claimed = Solution(sf.guards, sf.witnesses, sol.trace)
    try:
        cert, ok = _certify_instance(inst, claimed)
    except (GeometryError, IndexError, ValueError) as e:
        raise CliFailure(EXIT_UNCERTIFIED, "certification-failed", f"witnesses do not realize: {e}")
    if sf.flags is not None and sf.flags != cert.flags():
        ok = False
    report = {"valid": ok, "flags": cert.flags(), "guards": len(sf.guards)}
    if sf.trace_digest is not None:
        report["trace_matches"] = sf.trace_digest == sol.trace.digest()
    if not ok:
        sys.stderr.write(json.dumps({"error": "certification-failed", **report}) + "\n")
        return EXIT_UNCERTIFIED
    _emit(report, None)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        terrain, altitude = random_instance(args.n, args.seed, args.profile, args.margin)
    except ValueError as e:
        raise CliFailure(EXIT_INVALID, "invalid-parameters", str(e))
    _emit(atgp_json(terrain, altitude, seed=args.seed, profile=args.profile, n=args.n), args.out)
    return EXIT_OK


def cmd_profile(args) -> int:
    inst = _load(args.instance)
    heights = sorted(mpq(to_coord(h)) for h in args.heights.split(","))
    try:
        rows = profile_altitudes(inst.terrain, heights)
    except GeometryError as e:
        raise CliFailure(EXIT_INVALID, "invalid-height", str(e))
    _emit([{"height": coord_str(h), "opt": k} for h, k in rows], None)
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = bench(sizes, args.seed, args.profile)
    ratios = doubling_ratios(rows)
    _emit({
        "rows": [{"n": r.n, "seconds": round(r.seconds, 4), "guards": r.guards} for r in rows],
        "doubling_ratios": [round(x, 3) for x in ratios],
    }, None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="altguard", description="Minimum guards on an altitude line over a terrain.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve instance files ('-' reads stdin)")
    p.add_argument("instances", nargs="+")
    p.add_argument("--out")
    p.add_argument("--render", metavar="SVG")
    p.add_argument("--events", action="store_true", help="mark s/o/c events in the render")
    p.add_argument("--certify", action="store_true")
    p.add_argument("--check", action="store_true", help="cross-validate every sweep step")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="re-certify a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=PROFILES, default="random-walk")
    p.add_argument("--margin", default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("profile", help="minimum guard count at several altitudes")
    p.add_argument("instance")
    p.add_argument("--heights", required=True, help="comma separated, e.g. 5,7.5,100")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("bench", help="time the solver on random-walk terrains")
    p.add_argument("--sizes", default="1000,2000,4000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=PROFILES, default="random-walk")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliFailure as e:
        sys.stderr.write(json.dumps(e.payload) + "\n")
        return e.code
    except SweepInvariantError as e:
        sys.stderr.write(json.dumps({"error": "internal", "message": str(e).splitlines()[0]}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
