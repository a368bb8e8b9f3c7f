"""Command-line front end.

Every command prints one JSON document (``render`` prints DOT) and exits with
0 ok, 1 check violation, 2 usage or parse error, 3 budget or cap exceeded,
4 surface excluded by the classification tables.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import __version__, tagged
from .blocks import ALL_KINDS, KINDS, SearchBudgetExceeded, enumerate_decompositions
from .builder import ExceptionSurface, build_max_connected, plan_build, seed_triangulation
from .explore import (
    DESK_SUITE,
    SweepFailure,
    enumerate_triangulations,
    match1_sweep,
    mutation_class,
    verify_sweep,
)
from .quiver import Quiver, QuiverError, mutate, random_quiver
from .reconstruct import Ambiguous, NotInClass, Recovered, recover
from .surface import NO_CONNECTED_MAX_2FACES_ITEMS, SignatureError, classify_exceptions, parse_sig
from .triangulation import Triangulation, TriangulationError, exchange_quiver, flip, surface_signature

__all__ = ["CommandResult", "EXIT_CODES", "run", "main", "build_parser"]

EXIT_CODES = {"ok": 0, "violation": 1, "usage": 2, "budget": 3, "exception-surface": 4, "ambiguous": 0}


@dataclass
class CommandResult:
    status: str
    payload: dict = field(default_factory=dict)
    text: str | None = None  # raw output instead of JSON (DOT)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def render(self) -> str:
        if self.text is not None:
            return self.text
        return json.dumps(self.payload, indent=2) + "\n"


class UsageError(Exception):
    pass


# -- input helpers -------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_quiver(path: str) -> Quiver:
    return Quiver.parse(_read(path))


def _load_triangulation(path: str):
    """An ordinary triangulation, or a tagged one when the document carries tags."""
    doc = json.loads(_read(path))
    # accept the envelopes written by build, flip and reconstruct
    if isinstance(doc, dict) and isinstance(doc.get("triangulation"), dict):
        doc = doc["triangulation"]
    if "tags" in doc:
        return tagged.TaggedTriangulation.from_json(doc)
    return Triangulation.from_json(doc)


def signature(text: str):
    return parse_sig(text)


def _exception_payload(exc: ExceptionSurface) -> dict:
    return {
        "format": 1,
        "sig": str(exc.sig),
        "status": "exception-surface",
        "item": exc.item,
        "reason": NO_CONNECTED_MAX_2FACES_ITEMS[exc.item],
        "exceptions": classify_exceptions(exc.sig).names(),
    }


# -- commands ------------------------------------------------------------------


def cmd_build(args) -> CommandResult:
    sig = args.sig
    if args.seed_only:
        t = seed_triangulation(sig)
        return CommandResult("ok", {"format": 1, "sig": str(sig), "plan": ["seed"], "triangulation": t.to_json()})
    try:
        plan = plan_build(sig)
        t = build_max_connected(sig)
    except ExceptionSurface as exc:
        return CommandResult("exception-surface", _exception_payload(exc))
    return CommandResult("ok", {"format": 1, "sig": str(sig), "plan": plan.log(), "triangulation": t.to_json()})


def cmd_quiver(args) -> CommandResult:
    t = _load_triangulation(args.triangulation)
    q = tagged.exchange_quiver(t) if isinstance(t, tagged.TaggedTriangulation) else exchange_quiver(t)
    if args.text:
        return CommandResult("ok", text=q.to_text())
    return CommandResult("ok", q.to_json())


def cmd_mutate(args) -> CommandResult:
    q = _load_quiver(args.quiver)
    for k in args.at:
        if not 0 <= k < q.n:
            raise UsageError(f"vertex {k} out of range for a quiver on {q.n} vertices")
        q = mutate(q, k)
    if args.text:
        return CommandResult("ok", text=q.to_text())
    return CommandResult("ok", q.to_json())


def cmd_flip(args) -> CommandResult:
    t = _load_triangulation(args.triangulation)
    if isinstance(t, tagged.TaggedTriangulation):
        raise UsageError("flip works on ordinary triangulations")
    for a in args.arc:
        t = flip(t, a)
    return CommandResult("ok", {"format": 1, "triangulation": t.to_json()})


def cmd_enumerate(args) -> CommandResult:
    en = enumerate_triangulations(args.sig, args.cap)
    payload = {"format": 1, "sig": str(args.sig), "count": len(en), "truncated": en.truncated}
    if args.list:
        payload["triangulations"] = [t.to_json() for t in en]
    return CommandResult("budget" if en.truncated else "ok", payload)


def cmd_mutation_class(args) -> CommandResult:
    mc = mutation_class(_load_quiver(args.quiver), args.cap)
    payload = {"format": 1, "size": len(mc), "truncated": mc.truncated}
    if args.list:
        payload["quivers"] = [q.to_json() for q in mc.quivers]
    return CommandResult("budget" if mc.truncated else "ok", payload)


def _kinds(text: str | None):
    if not text:
        return ALL_KINDS
    kinds = tuple(k.strip() for k in text.split(",") if k.strip())
    bad = [k for k in kinds if k not in KINDS]
    if bad:
        raise UsageError(f"unknown block kinds {bad}; choose from {', '.join(ALL_KINDS)}")
    return kinds


def cmd_decompose(args) -> CommandResult:
    q = _load_quiver(args.quiver)
    kinds = _kinds(args.kinds)
    found = enumerate_decompositions(q, kinds, None if args.all else 2, args.budget).decompositions
    verdict = "none" if not found else "unique" if len(found) == 1 else "multiple"
    shown = found if args.all else found[:1]
    payload = {
        "format": 1,
        "kinds": list(kinds),
        "verdict": verdict,
        "count": len(found) if args.all or len(found) < 2 else None,
        "decompositions": [d.to_json() for d in shown],
    }
    return CommandResult("ok", payload)


def cmd_reconstruct(args) -> CommandResult:
    res = recover(_load_quiver(args.quiver), budget=args.budget)
    if isinstance(res, Recovered):
        return CommandResult(
            "ok",
            {
                "format": 1,
                "status": "recovered",
                "sig": str(res.sig),
                "surface": res.sig.describe(),
                "triangulation": res.triangulation.to_json(),
                "decomposition": res.decomposition.to_json(),
            },
        )
    if isinstance(res, Ambiguous):
        return CommandResult(
            "ambiguous",
            {
                "format": 1,
                "status": "ambiguous",
                "signatures": [str(s) for s in res.signatures],
                "candidates": [
                    {"sig": str(c.sig), "triangulation": c.triangulation.to_json(), "decomposition": c.decomposition.to_json()}
                    for c in res.candidates
                ],
            },
        )
    assert isinstance(res, NotInClass)
    return CommandResult("violation", {"format": 1, "status": "not-in-class", "reason": res.reason})


def _sweep_one(sig_text: str, cap: int, deep: bool) -> dict:
    try:
        return {"ok": True, "report": verify_sweep(parse_sig(sig_text), cap, deep).to_json()}
    except SweepFailure as exc:
        return {"ok": False, "sig": sig_text, "check": exc.check, "message": str(exc), "counterexample": exc.counterexample}


def _involution_check(rng_seed: int, count: int) -> dict:
    rng = random.Random(rng_seed)
    checked = 0
    for _ in range(count):
        q = random_quiver(rng, rng.randint(1, 8))
        for k in range(q.n):
            if mutate(mutate(q, k), k) != q:
                return {"ok": False, "check": "involution", "quiver": q.to_json(), "vertex": k}
            checked += 1
    return {"ok": True, "checked": checked}


def cmd_verify(args) -> CommandResult:
    sigs = [str(s) for s in args.sig] or list(DESK_SUITE)
    deep = not args.shallow
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_one, sigs, [args.cap] * len(sigs), [deep] * len(sigs)))
    else:
        results = [_sweep_one(s, args.cap, deep) for s in sigs]
    payload = {"format": 1, "rng_seed": args.rng_seed, "reports": [], "failed": 0}
    for r in results:
        if not r["ok"]:
            r.pop("ok")
            payload["failed"] = 1
            payload["counterexample"] = r
            return CommandResult("violation", payload)
        payload["reports"].append(r["report"])
    inv = _involution_check(args.rng_seed, args.random)
    if not inv.pop("ok"):
        payload["failed"] = 1
        payload["counterexample"] = inv
        return CommandResult("violation", payload)
    payload["involution"] = inv
    if not args.sig or args.match1:
        ens = [(parse_sig(s), list(enumerate_triangulations(parse_sig(s), args.cap))) for s in sigs]
        try:
            payload["match1"] = match1_sweep(ens)
        except SweepFailure as exc:
            payload["failed"] = 1
            payload["counterexample"] = {"check": exc.check, "message": str(exc), **exc.counterexample}
            return CommandResult("violation", payload)
    truncated = any(r["truncated"] for r in payload["reports"])
    return CommandResult("budget" if truncated and args.strict_cap else "ok", payload)


def cmd_render(args) -> CommandResult:
    if args.quiver:
        q = _load_quiver(args.quiver)
    else:
        t = _load_triangulation(args.triangulation)
        q = tagged.exchange_quiver(t) if isinstance(t, tagged.TaggedTriangulation) else exchange_quiver(t)
    return CommandResult("ok", text=q.to_dot(args.name))


def cmd_signature(args) -> CommandResult:
    t = _load_triangulation(args.triangulation)
    base = t.base if isinstance(t, tagged.TaggedTriangulation) else t
    sig = surface_signature(base)
    return CommandResult("ok", {"format": 1, "sig": str(sig), "surface": sig.describe()})


# -- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="surfclust", description="Triangulated surfaces, exchange quivers and surface recovery.")
    p.add_argument("--version", action="version", version=f"surfclust {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("build", help="maximal connected triangulation of a surface")
    s.add_argument("--sig", type=signature, required=True, help="g=G,p=P,h=(h1,...)")
    s.add_argument("--seed-only", action="store_true", help="emit a plain seed triangulation instead")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("quiver", help="exchange quiver of a triangulation")
    s.add_argument("--triangulation", required=True, metavar="FILE")
    s.add_argument("--text", action="store_true", help="plain text format instead of JSON")
    s.set_defaults(func=cmd_quiver)

    s = sub.add_parser("mutate", help="mutate a quiver at a sequence of vertices")
    s.add_argument("--quiver", required=True, metavar="FILE")
    s.add_argument("--at", type=int, action="append", required=True, metavar="K")
    s.add_argument("--text", action="store_true")
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("flip", help="flip arcs of a triangulation in order")
    s.add_argument("--triangulation", required=True, metavar="FILE")
    s.add_argument("--arc", type=int, action="append", required=True)
    s.set_defaults(func=cmd_flip)

    s = sub.add_parser("enumerate", help="flip-graph enumeration up to relabelling")
    s.add_argument("--sig", type=signature, required=True)
    s.add_argument("--cap", type=_positive, required=True)
    s.add_argument("--list", action="store_true", help="include every triangulation")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("mutation-class", help="mutation class up to isomorphism")
    s.add_argument("--quiver", required=True, metavar="FILE")
    s.add_argument("--cap", type=_positive, required=True)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_mutation_class)

    s = sub.add_parser("decompose", help="block decompositions of a quiver")
    s.add_argument("--quiver", required=True, metavar="FILE")
    s.add_argument("--kinds", help="comma-separated block kinds, e.g. I,II")
    s.add_argument("--all", action="store_true", help="list every decomposition")
    s.add_argument("--budget", type=_positive, default=2_000_000)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("reconstruct", help="recover the surface behind a quiver")
    s.add_argument("--quiver", required=True, metavar="FILE")
    s.add_argument("--budget", type=_positive, default=2_000_000)
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("verify", help="sweep surfaces and check every identity")
    s.add_argument("--sig", type=signature, action="append", default=[], help="repeatable; default is the desk suite")
    s.add_argument("--cap", type=_positive, default=20000)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--rng-seed", type=int, default=0)
    s.add_argument("--random", type=int, default=200, help="random quivers for the involution check")
    s.add_argument("--shallow", action="store_true", help="skip block uniqueness and recovery")
    s.add_argument("--match1", action="store_true", help="run the quiver/maximality sweep for explicit signatures")
    s.add_argument("--strict-cap", action="store_true", help="exit 3 when an enumeration hits the cap")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("render", help="DOT output of a quiver")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--quiver", metavar="FILE")
    src.add_argument("--triangulation", metavar="FILE")
    s.add_argument("--name", default="Q")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("signature", help="signature of the surface a triangulation lives on")
    s.add_argument("--triangulation", required=True, metavar="FILE")
    s.set_defaults(func=cmd_signature)
    return p


def run(argv: list[str] | None = None) -> CommandResult:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return CommandResult("usage", {"format": 1, "status": "usage", "error": str(exc)})
    except (QuiverError, TriangulationError, tagged.TaggedError, SignatureError, json.JSONDecodeError, KeyError) as exc:
        return CommandResult("usage", {"format": 1, "status": "parse-error", "error": f"{type(exc).__name__}: {exc}"})
    except SearchBudgetExceeded as exc:
        return CommandResult("budget", {"format": 1, "status": "budget", "error": str(exc)})


def main(argv: list[str] | None = None) -> int:
    try:
        res = run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    out = sys.stdout if res.status != "usage" else sys.stderr
    out.write(res.render())
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
