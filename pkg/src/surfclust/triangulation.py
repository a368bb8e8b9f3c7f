"""Combinatorial ideal triangulations.

A triangulation is a list of triangles, each a clockwise triple of sides.  A
side is either an arc ``("a", id)`` or a boundary segment ``("b", id)``.  A
self-folded triangle is stored with sides ``(loop, radius, radius)``.

Side ``i`` of a triangle runs from corner ``i`` to corner ``i + 1``.  The two
slots of an arc are glued with opposite orientations, so every assembled
complex is an oriented surface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .quiver import Quiver
from .surface import SurfaceSig, cap_capacity, parse_sig

__all__ = [
    "Side",
    "Tri",
    "Kind",
    "Triangulation",
    "TriangStats",
    "TriangulationError",
    "ExcludedTriangulation",
    "Topology",
    "arc",
    "bnd",
    "plain",
    "selffolded",
    "make",
    "validate",
    "check",
    "triangle_kind",
    "stats",
    "exchange_quiver",
    "predicted_edges",
    "edges_exclusion",
    "is_maximal",
    "is_connected_max_2faces",
    "surface_signature",
    "flip",
    "flippable_arcs",
    "canonical_key",
    "relabel_arcs",
]

Side = tuple  # ("a", id) or ("b", id)


class TriangulationError(ValueError):
    pass


class ExcludedTriangulation(TriangulationError):
    pass


def arc(i: int) -> Side:
    return ("a", int(i))


def bnd(i: int) -> Side:
    return ("b", int(i))


def _side(s) -> Side:
    if isinstance(s, tuple) and len(s) == 2 and s[0] in ("a", "b"):
        return (s[0], int(s[1]))
    if isinstance(s, str):
        s = s.strip()
        head, _, tail = s.partition(":")
        if not tail:
            head, tail = s[0], s[1:]
        if head in ("a", "b") and tail.lstrip("-").isdigit():
            return (head, int(tail))
    raise TriangulationError(f"bad side {s!r}; expected 'a:<id>' or 'b:<id>'")


@dataclass(frozen=True, order=True)
class Tri:
    sides: tuple
    folded: bool = False

    @property
    def loop(self) -> int:
        return self.sides[0][1]

    @property
    def radius(self) -> int:
        return self.sides[1][1]

    def arcs(self) -> list[int]:
        return [s[1] for s in self.sides if s[0] == "a"]

    def boundary_count(self) -> int:
        return sum(1 for s in self.sides if s[0] == "b")

    def normalised(self) -> "Tri":
        if self.folded:
            return self
        rots = [self.sides[i:] + self.sides[:i] for i in range(3)]
        return Tri(min(rots), False)


def plain(s0, s1, s2) -> Tri:
    return Tri((_side(s0), _side(s1), _side(s2)), False)


def selffolded(loop: int, radius: int) -> Tri:
    return Tri((arc(loop), arc(radius), arc(radius)), True)


class Kind(str, Enum):
    FACE = "face"
    WEDGE = "wedge"
    CAP = "cap"
    SELF_FOLDED = "self-folded"


@dataclass(frozen=True)
class Topology:
    """Result of assembling the glued complex."""

    sig: SurfaceSig
    corner_vertex: tuple[tuple[int, int, int], ...]
    punctures: tuple[int, ...]
    boundary_vertices: tuple[int, ...]
    boundary_cycles: tuple[tuple[int, ...], ...]
    vertex_count: int


@dataclass(frozen=True)
class Triangulation:
    """Immutable triangulation; construction normalises triangle order."""

    triangles: tuple[Tri, ...]
    arcs: frozenset = field(default=None)
    boundary: frozenset = field(default=None)
    declared_sig: SurfaceSig | None = None

    def __post_init__(self):
        tris = tuple(sorted(t.normalised() for t in self.triangles))
        object.__setattr__(self, "triangles", tris)
        seen_a = {s[1] for t in tris for s in t.sides if s[0] == "a"}
        seen_b = {s[1] for t in tris for s in t.sides if s[0] == "b"}
        object.__setattr__(self, "arcs", frozenset(seen_a if self.arcs is None else self.arcs))
        object.__setattr__(self, "boundary", frozenset(seen_b if self.boundary is None else self.boundary))

    def __eq__(self, other):
        if not isinstance(other, Triangulation):
            return NotImplemented
        return (self.triangles, self.arcs, self.boundary) == (other.triangles, other.arcs, other.boundary)

    def __hash__(self):
        return hash((self.triangles, self.arcs, self.boundary))

    @cached_property
    def slots(self) -> dict[Side, list[tuple[int, int]]]:
        out: dict[Side, list[tuple[int, int]]] = {}
        for ti, t in enumerate(self.triangles):
            for si, s in enumerate(t.sides):
                out.setdefault(s, []).append((ti, si))
        return out

    @cached_property
    def loops(self) -> dict[int, int]:
        """Map loop id to the radius it encloses."""
        return {t.loop: t.radius for t in self.triangles if t.folded}

    @cached_property
    def radii(self) -> dict[int, int]:
        return {t.radius: t.loop for t in self.triangles if t.folded}

    @cached_property
    def topology(self) -> Topology:
        return _assemble(self)

    def arc_ends(self, a: int) -> tuple[int, int]:
        """Vertex ids at the two ends of arc ``a`` (start, end of its first slot)."""
        ti, si = self.slots[arc(a)][0]
        cv = self.topology.corner_vertex[ti]
        return cv[si], cv[(si + 1) % 3]

    # -- serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        tris = []
        for t in self.triangles:
            if t.folded:
                tris.append({"selffolded": {"loop": t.loop, "radius": t.radius}})
            else:
                tris.append({"sides": [f"{k}:{i}" for k, i in t.sides]})
        doc = {"format": 1, "arcs": sorted(self.arcs), "boundary": sorted(self.boundary), "triangles": tris}
        if self.declared_sig is not None:
            doc["sig"] = str(self.declared_sig)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Triangulation":
        if doc.get("format", 1) != 1:
            raise TriangulationError(f"unsupported triangulation format {doc.get('format')!r}")
        tris = []
        for entry in doc["triangles"]:
            if "selffolded" in entry:
                sf = entry["selffolded"]
                tris.append(selffolded(sf["loop"], sf["radius"]))
            elif "sides" in entry and len(entry["sides"]) == 3:
                tris.append(plain(*entry["sides"]))
            else:
                raise TriangulationError(f"bad triangle entry {entry!r}")
        sig = parse_sig(doc["sig"]) if doc.get("sig") else None
        arcs = frozenset(doc["arcs"]) if "arcs" in doc else None
        bd = frozenset(doc["boundary"]) if "boundary" in doc else None
        return cls(tuple(tris), arcs, bd, sig)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __repr__(self):
        parts = []
        for t in self.triangles:
            if t.folded:
                parts.append(f"SF({t.loop}/{t.radius})")
            else:
                parts.append("(" + " ".join(f"{k}{i}" for k, i in t.sides) + ")")
        return "Triangulation[" + ", ".join(parts) + "]"


def make(triangles: Iterable, sig: SurfaceSig | None = None) -> Triangulation:
    """Convenience constructor: plain triangles as side triples, or ``Tri`` values."""
    tris = [t if isinstance(t, Tri) else plain(*t) for t in triangles]
    return Triangulation(tuple(tris), declared_sig=sig)


def relabel_arcs(t: Triangulation, mapping: dict[int, int]) -> Triangulation:
    def sub(s):
        return ("a", mapping[s[1]]) if s[0] == "a" else s

    tris = tuple(Tri(tuple(sub(s) for s in tr.sides), tr.folded) for tr in t.triangles)
    return Triangulation(tris, frozenset(mapping[a] for a in t.arcs), t.boundary, t.declared_sig)


# -- validation and assembly ---------------------------------------------------


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _slot_diagnostics(t: Triangulation) -> list[str]:
    diags = []
    if not t.triangles:
        return ["triangulation has no triangles"]
    for ti, tr in enumerate(t.triangles):
        if tr.folded:
            if tr.sides[1] != tr.sides[2] or tr.loop == tr.radius:
                diags.append(f"triangle {ti}: malformed self-folded triangle")
            continue
        if tr.boundary_count() == 3:
            diags.append(f"triangle {ti}: all three sides are boundary segments")
        ids = [s for s in tr.sides if s[0] == "a"]
        if len(set(ids)) != len(ids):
            diags.append(f"triangle {ti}: repeated arc in a plain triangle; declare it self-folded")
    used_a = {s[1] for s in t.slots if s[0] == "a"}
    used_b = {s[1] for s in t.slots if s[0] == "b"}
    for a in sorted(set(t.arcs) ^ used_a):
        diags.append(f"arc {a}: declared but unused" if a in t.arcs else f"arc {a}: used but not declared")
    for b in sorted(set(t.boundary) ^ used_b):
        diags.append(
            f"boundary segment {b}: declared but unused" if b in t.boundary else f"boundary segment {b}: used but not declared"
        )
    for side, where in sorted(t.slots.items()):
        want = 2 if side[0] == "a" else 1
        if len(where) != want:
            what = "arc" if side[0] == "a" else "boundary segment"
            diags.append(f"{what} {side[1]}: fills {len(where)} slots, expected {want}")
    radii = [tr.radius for tr in t.triangles if tr.folded]
    for r in radii:
        if any(not tr.folded and ("a", r) in tr.sides for tr in t.triangles):
            diags.append(f"arc {r}: radius also used outside its self-folded triangle")
    loops = [tr.loop for tr in t.triangles if tr.folded]
    if len(set(loops)) != len(loops):
        diags.append("a loop encloses two self-folded triangles")
    return diags


def _assemble(t: Triangulation) -> Topology:
    diags = _slot_diagnostics(t)
    if diags:
        raise TriangulationError(diags[0])
    nt = len(t.triangles)
    dsu = _DSU(3 * nt)
    tri_dsu = _DSU(nt)
    for side, where in t.slots.items():
        if side[0] != "a":
            continue
        (t1, i1), (t2, i2) = where
        dsu.union(3 * t1 + i1, 3 * t2 + (i2 + 1) % 3)
        dsu.union(3 * t1 + (i1 + 1) % 3, 3 * t2 + i2)
        tri_dsu.union(t1, t2)
    if len({tri_dsu.find(i) for i in range(nt)}) != 1:
        raise TriangulationError("glued complex is disconnected")
    ids: dict[int, int] = {}
    corner_vertex = []
    for ti in range(nt):
        row = []
        for ci in range(3):
            root = dsu.find(3 * ti + ci)
            row.append(ids.setdefault(root, len(ids)))
        corner_vertex.append(tuple(row))
    nv = len(ids)
    start_at: dict[int, int] = {}
    end_of: dict[int, int] = {}
    for side, where in t.slots.items():
        if side[0] != "b":
            continue
        ti, si = where[0]
        u, v = corner_vertex[ti][si], corner_vertex[ti][(si + 1) % 3]
        if u in start_at:
            raise TriangulationError(f"marked point {u} starts two boundary segments")
        start_at[u] = side[1]
        end_of[side[1]] = v
    cycles = []
    seen: set[int] = set()
    for seg in sorted(end_of):
        if seg in seen:
            continue
        cyc = []
        cur = seg
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            nxt_vertex = end_of[cur]
            if nxt_vertex not in start_at:
                raise TriangulationError(f"boundary breaks at marked point {nxt_vertex}")
            cur = start_at[nxt_vertex]
        if cur != seg:
            raise TriangulationError("boundary segments do not close up into circles")
        cycles.append(tuple(cyc))
    bverts = set(start_at)
    if set(end_of.values()) != bverts:
        raise TriangulationError("boundary is not a union of circles")
    punctures = tuple(v for v in range(nv) if v not in bverts)
    chi = nv - (len(t.arcs) + len(t.boundary)) + nt
    b = len(cycles)
    twice_g = 2 - b - chi
    if twice_g < 0 or twice_g % 2:
        raise TriangulationError(f"inconsistent Euler characteristic {chi}")
    sig = SurfaceSig(twice_g // 2, len(punctures), tuple(len(c) for c in cycles))
    return Topology(sig, tuple(corner_vertex), punctures, tuple(sorted(bverts)), tuple(cycles), nv)


def validate(t: Triangulation) -> list[str]:
    """Diagnostics; an empty list means the triangulation is valid."""
    diags = _slot_diagnostics(t)
    if diags:
        return diags
    try:
        top = t.topology
    except TriangulationError as exc:
        return [str(exc)]
    if t.declared_sig is not None and top.sig != t.declared_sig:
        return [f"declared signature {t.declared_sig} but the complex is {top.sig}"]
    return []


def check(t: Triangulation) -> Triangulation:
    diags = validate(t)
    if diags:
        raise TriangulationError(diags[0])
    return t


def surface_signature(t: Triangulation) -> SurfaceSig:
    return t.topology.sig


# -- statistics ----------------------------------------------------------------


def triangle_kind(t: Triangulation, index: int) -> Kind:
    tr = t.triangles[index]
    if tr.folded:
        return Kind.SELF_FOLDED
    return (Kind.FACE, Kind.WEDGE, Kind.CAP)[tr.boundary_count()]


@dataclass(frozen=True)
class TriangStats:
    f: int
    w: int
    c: int
    d_neg: int
    d_pos: int
    s_f: int
    s_w: int


def _follows(tr: Tri, a: int, b: int) -> bool:
    """True when arc ``b`` directly follows arc ``a`` clockwise in ``tr``."""
    ids = [s[1] if s[0] == "a" else None for s in tr.sides]
    i = ids.index(a)
    return ids[(i + 1) % 3] == b


def double_glued_pairs(t: Triangulation) -> tuple[list, list]:
    """Pairs of triangles sharing exactly two arcs, split into (negative, positive)."""
    neg, pos = [], []
    sets = [set(tr.arcs()) for tr in t.triangles]
    for i in range(len(t.triangles)):
        for j in range(i + 1, len(t.triangles)):
            shared = sets[i] & sets[j]
            if len(shared) != 2:
                continue
            ti, tj = t.triangles[i], t.triangles[j]
            if ti.folded or tj.folded:
                continue
            a, b = sorted(shared)
            (pos if _follows(ti, a, b) == _follows(tj, a, b) else neg).append((i, j))
    return neg, pos


def stats(t: Triangulation) -> TriangStats:
    check(t)
    kinds = [triangle_kind(t, i) for i in range(len(t.triangles))]
    loops = t.loops
    f = sum(k in (Kind.FACE, Kind.SELF_FOLDED) for k in kinds)
    w = kinds.count(Kind.WEDGE)
    c = kinds.count(Kind.CAP)
    neg, pos = double_glued_pairs(t)
    s_f = s_w = 0
    for tr, k in zip(t.triangles, kinds):
        if any(a in loops for a in tr.arcs()):
            if k is Kind.FACE:
                s_f += 1
            elif k is Kind.WEDGE:
                s_w += 1
    return TriangStats(f, w, c, len(neg), len(pos), s_f, s_w)


# -- exchange quiver -----------------------------------------------------------


def exchange_quiver(t: Triangulation) -> Quiver:
    """Quiver on the arcs (sorted by id) built from clockwise adjacency.

    A loop of a self-folded triangle stands for itself together with its radius
    wherever it appears in another triangle.
    """
    check(t)
    order = sorted(t.arcs)
    pos = {a: i for i, a in enumerate(order)}
    n = len(order)
    b = [[0] * n for _ in range(n)]
    loops = t.loops

    def pre(a):
        return (a, loops[a]) if a in loops else (a,)

    for tr in t.triangles:
        if tr.folded:
            continue
        for i in range(3):
            s, s2 = tr.sides[i], tr.sides[(i + 1) % 3]
            if s[0] != "a" or s2[0] != "a":
                continue
            for x in pre(s[1]):
                for y in pre(s2[1]):
                    b[pos[x]][pos[y]] += 1
                    b[pos[y]][pos[x]] -= 1
    return Quiver.from_signed(b, tuple(order))


def edges_exclusion(t: Triangulation) -> str | None:
    """Name of the excluded configuration present in ``t``, if any."""
    loops = t.loops
    for i, tr in enumerate(t.triangles):
        if tr.folded:
            continue
        nloops = sum(1 for a in tr.arcs() if a in loops)
        k = triangle_kind(t, i)
        if k is Kind.CAP and nloops:
            return "self-folded triangulation of the once-punctured digon"
        if k is Kind.WEDGE and nloops == 2:
            return "self-folded triangulation of the twice-punctured monogon"
        if k is Kind.FACE and nloops == 3:
            return "self-folded triangulation of the 4-punctured sphere"
    return None


def predicted_edges(t: Triangulation) -> int:
    excl = edges_exclusion(t)
    if excl:
        raise ExcludedTriangulation(f"edge formula does not apply to the {excl}")
    s = stats(t)
    return 3 * s.f + s.w - 2 * s.d_neg - s.s_f - 2 * s.s_w


class MaximalVerdict:
    """Truthy verdict carrying the reason."""

    __slots__ = ("value", "reason")

    def __init__(self, value: bool, reason: str):
        self.value = value
        self.reason = reason

    def __bool__(self):
        return self.value

    def __repr__(self):
        return f"MaximalVerdict({self.value}, {self.reason!r})"


def is_maximal(t: Triangulation) -> MaximalVerdict:
    check(t)
    if t.loops:
        return MaximalVerdict(False, "contains a self-folded triangle")
    neg, _ = double_glued_pairs(t)
    if neg:
        i, j = neg[0]
        return MaximalVerdict(False, f"triangles {i} and {j} are negatively double-glued")
    s = stats(t)
    cap = cap_capacity(surface_signature(t))
    if s.c != cap:
        return MaximalVerdict(False, f"{s.c} caps, capacity {cap}")
    return MaximalVerdict(True, "maximal")


def face_graph_connected(t: Triangulation) -> bool:
    faces = [i for i in range(len(t.triangles)) if triangle_kind(t, i) in (Kind.FACE, Kind.SELF_FOLDED)]
    if not faces:
        return False
    fs = set(faces)
    adj: dict[int, set[int]] = {i: set() for i in faces}
    for side, where in t.slots.items():
        if side[0] == "a" and len(where) == 2:
            (t1, _), (t2, _) = where
            if t1 in fs and t2 in fs and t1 != t2:
                adj[t1].add(t2)
                adj[t2].add(t1)
    seen = {faces[0]}
    stack = [faces[0]]
    while stack:
        u = stack.pop()
        for v in adj[u] - seen:
            seen.add(v)
            stack.append(v)
    return len(seen) == len(faces)


def is_connected_max_2faces(t: Triangulation) -> bool:
    if not is_maximal(t):
        return False
    return stats(t).f >= 2 and face_graph_connected(t)


# -- flips ---------------------------------------------------------------------


def flippable_arcs(t: Triangulation) -> list[int]:
    return sorted(a for a in t.arcs if a not in t.radii)


def flip(t: Triangulation, a: int) -> Triangulation:
    """Replace arc ``a`` by the other diagonal of its quadrilateral.

    The new arc keeps the identifier ``a``, so flipping twice is the identity
    and quiver labels line up with mutation at ``a``.
    """
    key = arc(a)
    if key not in t.slots:
        raise TriangulationError(f"no arc {a}")
    if a in t.radii:
        raise TriangulationError(f"arc {a} is the radius of a self-folded triangle and cannot be flipped")
    (t1, i1), (t2, i2) = t.slots[key]
    if t1 == t2:
        raise TriangulationError(f"arc {a} occupies both sides of one triangle")
    s1, s2 = t.triangles[t1].sides, t.triangles[t2].sides
    _, p, q = s1[i1:] + s1[:i1]
    _, r, s = s2[i2:] + s2[:i2]
    new = [_tri_from(q, r, key), _tri_from(s, p, key)]
    rest = [tr for k, tr in enumerate(t.triangles) if k not in (t1, t2)]
    return Triangulation(tuple(rest + new), t.arcs, t.boundary, t.declared_sig)


def _tri_from(x, y, z) -> Tri:
    if x == y:
        return Tri((z, x, y), True)
    return Tri((x, y, z), False)


# -- canonical key -------------------------------------------------------------


def _traverse(t: Triangulation, start: int, rot: int) -> tuple:
    relabel: dict[int, int] = {}
    seen = {start}
    queue = [(start, rot)]
    out = []
    head = 0
    while head < len(queue):
        ti, r = queue[head]
        head += 1
        tr = t.triangles[ti]
        sides = tr.sides if tr.folded else tr.sides[r:] + tr.sides[:r]
        tok = [1 if tr.folded else 0]
        for kind, ident in sides:
            if kind == "a":
                tok.append(relabel.setdefault(ident, len(relabel)))
            else:
                tok.append(-1 - ident)
        out.append(tuple(tok))
        for kind, ident in sides:
            if kind != "a":
                continue
            for tj, sj in t.slots[(kind, ident)]:
                if tj not in seen:
                    seen.add(tj)
                    queue.append((tj, sj))
    return tuple(out)


def canonical_key(t: Triangulation) -> tuple:
    """Key equal for two triangulations iff they agree up to renaming arcs.

    Boundary segment identifiers are kept, so for bordered surfaces this
    counts labelled triangulations.
    """
    if t.boundary:
        ti, si = t.slots[bnd(min(t.boundary))][0]
        return _traverse(t, ti, si)
    best = None
    for ti, tr in enumerate(t.triangles):
        for r in ((0,) if tr.folded else (0, 1, 2)):
            k = _traverse(t, ti, r)
            if best is None or k < best:
                best = k
    return best
