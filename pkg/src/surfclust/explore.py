"""Flip graphs, mutation classes and the verification sweep."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .quiver import Quiver, canonical_form, mutate
from .triangulation import Triangulation, canonical_key, flip, flippable_arcs

__all__ = [
    "DESK_SUITE",
    "SweepFailure",
    "SweepReport",
    "verify_sweep",
    "match1_sweep",
    "check_member",
    "flip_neighbors",
    "Enumeration",
    "enumerate_triangulations",
    "enumerate_from",
    "MutationClass",
    "mutation_class",
]


# the sweep suite: small polygons, annuli and punctured surfaces
DESK_SUITE = (
    "g=0,p=0,h=(4)",
    "g=0,p=0,h=(5)",
    "g=0,p=0,h=(6)",
    "g=0,p=0,h=(7)",
    "g=0,p=0,h=(8)",
    "g=0,p=0,h=(9)",
    "g=0,p=0,h=(1,1)",
    "g=0,p=0,h=(2,1)",
    "g=0,p=0,h=(2,2)",
    "g=0,p=0,h=(3,1)",
    "g=1,p=1,h=()",
    "g=0,p=1,h=(5)",
    "g=0,p=2,h=(3)",
)


def flip_neighbors(t: Triangulation) -> list[tuple[int, Triangulation]]:
    return [(a, flip(t, a)) for a in flippable_arcs(t)]


@dataclass
class Enumeration:
    """Flip-BFS result: one representative per class, in discovery order."""

    triangulations: list[Triangulation]
    truncated: bool
    edges: list[tuple[int, int, int]] = field(default_factory=list)

    def __len__(self):
        return len(self.triangulations)

    def __iter__(self):
        return iter(self.triangulations)


def enumerate_from(seed: Triangulation, cap: int, record_edges: bool = False) -> Enumeration:
    """BFS closure of ``seed`` under flips, deduplicated up to renaming arcs.

    ``edges`` holds ``(i, arc, j)`` where flipping ``arc`` in member ``i``
    gives a triangulation equivalent to member ``j``.
    """
    index = {canonical_key(seed): 0}
    members = [seed]
    edges = []
    queue = deque([0])
    truncated = False
    while queue:
        i = queue.popleft()
        for a, nb in flip_neighbors(members[i]):
            key = canonical_key(nb)
            j = index.get(key)
            if j is None:
                if len(members) >= cap:
                    truncated = True
                    continue
                j = len(members)
                index[key] = j
                members.append(nb)
                queue.append(j)
            if record_edges:
                edges.append((i, a, j))
    return Enumeration(members, truncated, edges)


def enumerate_triangulations(sig, cap: int = 20000, record_edges: bool = False) -> Enumeration:
    from .builder import seed_triangulation

    return enumerate_from(seed_triangulation(sig), cap, record_edges)


@dataclass
class MutationClass:
    quivers: list[Quiver]
    certificates: list[str]
    truncated: bool

    def __len__(self):
        return len(self.quivers)

    def __contains__(self, q: Quiver) -> bool:
        return canonical_form(q)[1] in set(self.certificates)


def mutation_class(q: Quiver, cap: int = 10000) -> MutationClass:
    """BFS over mutations, one quiver per isomorphism class."""
    first = canonical_form(q)[1]
    certs = {first: 0}
    quivers = [q]
    order = [first]
    queue = deque([0])
    truncated = False
    while queue:
        cur = quivers[queue.popleft()]
        for k in range(cur.n):
            nb = mutate(cur, k)
            c = canonical_form(nb)[1]
            if c in certs:
                continue
            if len(quivers) >= cap:
                truncated = True
                continue
            certs[c] = len(quivers)
            quivers.append(nb)
            order.append(c)
            queue.append(len(quivers) - 1)
    return MutationClass(quivers, order, truncated)


# -- verification sweep --------------------------------------------------------


class SweepFailure(AssertionError):
    def __init__(self, check: str, message: str, counterexample: dict):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.counterexample = counterexample


@dataclass
class SweepReport:
    sig: str
    triangulations: int
    truncated: bool
    passed: dict[str, int] = field(default_factory=dict)
    skipped: dict[str, int] = field(default_factory=dict)
    maximal: int = 0

    def ok(self, check: str, k: int = 1):
        self.passed[check] = self.passed.get(check, 0) + k

    def skip(self, check: str, k: int = 1):
        self.skipped[check] = self.skipped.get(check, 0) + k

    def to_json(self) -> dict:
        return {
            "format": 1,
            "sig": self.sig,
            "triangulations": self.triangulations,
            "truncated": self.truncated,
            "maximal": self.maximal,
            "passed": dict(sorted(self.passed.items())),
            "skipped": dict(sorted(self.skipped.items())),
            "failed": 0,
        }


def _fail(check: str, message: str, t: Triangulation, **extra):
    payload = {"check": check, "message": message, "triangulation": t.to_json()}
    payload.update(extra)
    raise SweepFailure(check, message, payload)


def check_member(t: Triangulation, sig, report: SweepReport, deep: bool = True) -> None:
    """Run every per-triangulation identity on ``t`` and count it in ``report``."""
    from . import tagged
    from .blocks import enumerate_decompositions
    from .reconstruct import Recovered, recover
    from .surface import BLOCK_ROUTE_EXCEPTIONS, cap_capacity, edge_bound, rank
    from .triangulation import (
        edges_exclusion,
        exchange_quiver,
        is_connected_max_2faces,
        is_maximal,
        predicted_edges,
        stats,
        surface_signature,
    )

    if surface_signature(t) != sig:
        _fail("signature", f"member has signature {surface_signature(t)}", t)
    report.ok("signature")
    n = len(t.arcs)
    if n != rank(sig):
        _fail("rank", f"{n} arcs but rank {rank(sig)}", t)
    report.ok("rank")
    s = stats(t)
    if 3 * s.f + 2 * s.w + s.c != 2 * n or s.w + 2 * s.c != sig.marked_boundary:
        _fail("fwc", f"counts f={s.f} w={s.w} c={s.c} violate the face/wedge/cap identities", t)
    if s.c > cap_capacity(sig):
        _fail("fwc", f"{s.c} caps exceed capacity", t)
    report.ok("fwc")
    q = exchange_quiver(t)
    e = q.edge_count
    excl = edges_exclusion(t)
    if excl is None:
        pe = predicted_edges(t)
        if pe != e:
            _fail("edges", f"quiver has {e} arrows, formula gives {pe}", t)
        report.ok("edges")
    else:
        report.skip("edges")
    bound = edge_bound(sig)
    maximal = bool(is_maximal(t))
    report.maximal += maximal
    if e > bound:
        _fail("bound", f"{e} arrows exceed the bound {bound}", t)
    if excl is not None and "4-punctured sphere" in excl:
        if e != bound:
            _fail("bound", "exceptional sphere triangulation should attain the bound", t)
        report.skip("bound")
    else:
        if (e == bound) != maximal:
            _fail("bound", f"e={e}, bound={bound}, maximal={maximal}", t)
        report.ok("bound")
    # tagged identities
    tt = tagged.tau(t)
    if tagged.to_ordinary(tt) != t:
        _fail("tagged", "untagging the tagged version does not give the triangulation back", t)
    if tagged.exchange_quiver(tt) != q:
        _fail("tagged", "tagged quiver differs", t)
    punct = tt.punctures
    for R in ([frozenset(punct)] + [frozenset({y}) for y in punct]):
        r = tagged.retag(tt, R)
        if tagged.retag(r, R) != tt:
            _fail("tagged", f"retag at {sorted(R)} is not an involution", t)
        if tagged.exchange_quiver(r).edge_count != e:
            _fail("tagged", f"retag at {sorted(R)} changes the arrow count", t)
    report.ok("tagged")
    if not deep:
        return
    if is_connected_max_2faces(t):
        if sig.key in BLOCK_ROUTE_EXCEPTIONS:
            report.skip("uniqueness")
            report.skip("recover")
            return
        found = enumerate_decompositions(q).decompositions
        if len(found) != 1 or any(k not in ("I", "II") for k in found[0].kinds):
            _fail("uniqueness", f"{len(found)} decompositions, kinds {[d.kinds for d in found]}", t)
        report.ok("uniqueness")
        res = recover(q)
        if not isinstance(res, Recovered) or res.sig != sig:
            _fail("recover", f"recover returned {type(res).__name__}", t)
        report.ok("recover")


def verify_sweep(sig, cap: int = 20000, deep: bool = True, mutation_cap: int = 5000) -> SweepReport:
    """Enumerate ``sig`` by flips and check every identity; raise ``SweepFailure`` on the first violation."""
    from .triangulation import exchange_quiver

    en = enumerate_triangulations(sig, cap, record_edges=True)
    report = SweepReport(str(sig), len(en), en.truncated)
    quivers = []
    for t in en:
        check_member(t, sig, report, deep)
        quivers.append(exchange_quiver(t))
    for i, a, _ in en.edges:
        t = en.triangulations[i]
        q = quivers[i]
        got = exchange_quiver(flip(t, a))
        want = mutate(q, q.index(a))
        if got != want:
            _fail("flip-mutation", f"flipping arc {a} does not mutate the quiver", t, arc=a)
        report.ok("flip-mutation")
    mc = mutation_class(quivers[0], mutation_cap)
    if mc.truncated:
        report.skip("mutation-class", len(quivers))
    else:
        certs = set(mc.certificates)
        for t, q in zip(en, quivers):
            if canonical_form(q)[1] not in certs:
                _fail("mutation-class", "quiver outside the mutation class of the seed", t)
        report.ok("mutation-class", len(quivers))
    return report


def match1_sweep(enumerations) -> dict:
    """Group triangulations by quiver class; a class with a maximal member must be all maximal.

    ``enumerations`` is an iterable of ``(sig, triangulations)``.
    """
    from .surface import MATCH1_EXCEPTIONS
    from .triangulation import exchange_quiver, is_maximal

    groups: dict[str, list] = {}
    for sig, ts in enumerations:
        if sig.key in MATCH1_EXCEPTIONS:
            continue
        for t in ts:
            cert = canonical_form(exchange_quiver(t))[1]
            groups.setdefault(cert, []).append((sig, t, bool(is_maximal(t))))
    pairs = 0
    for members in groups.values():
        flags = [m[2] for m in members]
        if any(flags):
            k = len(members)
            pairs += flags.count(True) * k
            bad = next((m for m in members if not m[2]), None)
            if bad is not None:
                good = next(m for m in members if m[2])
                raise SweepFailure(
                    "match1",
                    f"{bad[0]} triangulation is not maximal but shares a quiver with a maximal one",
                    {"maximal": good[1].to_json(), "other": bad[1].to_json()},
                )
    return {"classes": len(groups), "pairs_checked": pairs}
