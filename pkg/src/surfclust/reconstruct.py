"""Recover a surface from an exchange quiver, and transport quiver isomorphisms.

``recover`` runs the block search and glues each decomposition.  When the
decomposition is unique the surface is determined.  ``transport`` turns a
quiver isomorphism between two triangulations into a matching of their
triangles: faces first, grown along shared arcs, then wedges, then caps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .blocks import ALL_KINDS, BlockDecomposition, decomposition_to_triangulation, enumerate_decompositions
from .quiver import Quiver, is_connected
from .surface import MATCH1_EXCEPTIONS, RECONSTRUCTION_EXCEPTIONS, SurfaceSig
from .triangulation import (
    Kind,
    Triangulation,
    exchange_quiver,
    is_connected_max_2faces,
    is_maximal,
    stats,
    surface_signature,
    triangle_kind,
)

__all__ = [
    "Recovered",
    "Ambiguous",
    "NotInClass",
    "Candidate",
    "recover",
    "TriangleCorrespondence",
    "MatchFailure",
    "PreconditionError",
    "transport",
    "check_match1",
]


@dataclass
class Candidate:
    decomposition: BlockDecomposition
    triangulation: Triangulation
    sig: SurfaceSig


@dataclass
class Recovered:
    triangulation: Triangulation
    sig: SurfaceSig
    decomposition: BlockDecomposition


@dataclass
class Ambiguous:
    candidates: list[Candidate]

    @property
    def signatures(self) -> list[SurfaceSig]:
        return sorted({c.sig for c in self.candidates})


@dataclass
class NotInClass:
    reason: str = "no block decomposition"


def recover(q: Quiver, kinds=ALL_KINDS, budget: int | None = 2_000_000):
    """``Recovered`` for a unique decomposition, ``Ambiguous`` for several, else ``NotInClass``.

    Arcs of the returned triangulations are the vertex indices of ``q``.
    """
    if not is_connected(q):
        return NotInClass("quiver is not connected")
    found = enumerate_decompositions(q, kinds, None, budget).decompositions
    if not found:
        return NotInClass()
    cands = []
    for d in found:
        t = decomposition_to_triangulation(d)
        cands.append(Candidate(d, t, surface_signature(t)))
    if len(cands) == 1:
        c = cands[0]
        return Recovered(c.triangulation, c.sig, c.decomposition)
    return Ambiguous(cands)


# -- transport -----------------------------------------------------------------


class PreconditionError(ValueError):
    pass


class MatchFailure(RuntimeError):
    def __init__(self, message: str, t1_triangle: int | None = None, t2_triangle: int | None = None):
        super().__init__(message)
        self.t1_triangle = t1_triangle
        self.t2_triangle = t2_triangle


@dataclass
class TriangleCorrespondence:
    triangles: dict[int, int]
    arcs: dict[int, int]
    sig: SurfaceSig
    counts: tuple[int, int, int] = field(default=(0, 0, 0))
    t2_maximal: bool = True


def _check_iso(t1: Triangulation, t2: Triangulation, phi: Mapping[int, int]) -> None:
    q1, q2 = exchange_quiver(t1), exchange_quiver(t2)
    if set(phi) != set(t1.arcs) or set(phi.values()) != set(t2.arcs):
        raise PreconditionError("phi must be a bijection between the arc sets")
    for a in t1.arcs:
        for b in t1.arcs:
            if q1.mult[q1.index(a)][q1.index(b)] != q2.mult[q2.index(phi[a])][q2.index(phi[b])]:
                raise PreconditionError(f"phi is not a quiver isomorphism at arcs {a}, {b}")


def _arc_cycle(tr) -> tuple:
    return tuple(s[1] if s[0] == "a" else None for s in tr.sides)


def _rotations(c: tuple):
    return [c[i:] + c[:i] for i in range(3)]


def transport(t1: Triangulation, phi: Mapping[int, int], t2: Triangulation) -> TriangleCorrespondence:
    if not is_connected_max_2faces(t1):
        raise PreconditionError("t1 must be a connected maximal triangulation with at least two faces")
    for t in (t1, t2):
        if surface_signature(t).key in RECONSTRUCTION_EXCEPTIONS:
            raise PreconditionError(f"{surface_signature(t)} is excluded from transport")
    phi = dict(phi)
    _check_iso(t1, t2, phi)

    kinds1 = [triangle_kind(t1, i) for i in range(len(t1.triangles))]
    kinds2 = [triangle_kind(t2, i) for i in range(len(t2.triangles))]
    # index t2 triangles by their clockwise arc pattern
    # (two faces can share a pattern, e.g. on a once-punctured torus)
    lookup: dict[tuple, list[int]] = {}
    for j, tr in enumerate(t2.triangles):
        for rot in set(_rotations(_arc_cycle(tr))):
            lookup.setdefault((kinds2[j], rot), []).append(j)
    used: set[int] = set()

    def image(i: int) -> int:
        cyc = tuple(None if a is None else phi[a] for a in _arc_cycle(t1.triangles[i]))
        for rot in _rotations(cyc):
            for j in lookup.get((kinds1[i], rot), ()):
                if j not in used:
                    used.add(j)
                    return j
        raise MatchFailure(
            f"{kinds1[i].value} {i} of t1 has no {kinds1[i].value} of t2 with clockwise arcs {cyc}", i, None
        )

    corr: dict[int, int] = {}
    faces = [i for i, k in enumerate(kinds1) if k is Kind.FACE]
    adj = {i: [] for i in faces}
    for side, where in t1.slots.items():
        if side[0] == "a":
            (a, _), (b, _) = where
            if a in adj and b in adj and a != b:
                adj[a].append(b)
                adj[b].append(a)
    # stage 1: faces, grown along shared arcs from a seed pair
    seed = faces[0]
    queue = deque([seed])
    seen = {seed}
    while queue:
        i = queue.popleft()
        corr[i] = image(i)
        for k in sorted(adj[i]):
            if k not in seen:
                seen.add(k)
                queue.append(k)
    # stages 2 and 3: wedges, then caps
    for kind in (Kind.WEDGE, Kind.CAP):
        for i, k in enumerate(kinds1):
            if k is kind:
                corr[i] = image(i)
    if len(set(corr.values())) != len(corr) or len(corr) != len(t2.triangles):
        raise MatchFailure("triangle correspondence is not a bijection")
    sig1, sig2 = surface_signature(t1), surface_signature(t2)
    if sig1 != sig2:
        raise MatchFailure(f"signatures differ: {sig1} vs {sig2}")
    s1, s2 = stats(t1), stats(t2)
    if (s1.f, s1.w, s1.c) != (s2.f, s2.w, s2.c):
        raise MatchFailure("face, wedge or cap counts differ")
    if not is_maximal(t2):
        raise MatchFailure("t2 is not maximal")
    return TriangleCorrespondence(corr, phi, sig1, (s1.f, s1.w, s1.c), True)


def check_match1(t1: Triangulation, t2: Triangulation, phi: Mapping[int, int]) -> bool:
    """Whether ``t2`` is maximal, given a quiver isomorphism from maximal ``t1``."""
    if not is_maximal(t1):
        raise PreconditionError("t1 must be maximal")
    for t in (t1, t2):
        if surface_signature(t).key in MATCH1_EXCEPTIONS:
            raise PreconditionError(f"{surface_signature(t)} is excluded")
    _check_iso(t1, t2, dict(phi))
    return bool(is_maximal(t2))
