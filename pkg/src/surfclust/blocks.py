"""Block decompositions of quivers and their assembly into triangulations.

A block is a small quiver with some vertices marked as outlets.  A
decomposition places blocks on the vertices of a quiver so that

* every vertex is either a non-outlet of exactly one block, or an outlet of
  one or two distinct blocks,
* the signed sum of the block arrows equals the quiver (opposite arrows
  cancel).

Each block corresponds to a piece of a triangulation, so a decomposition can
be glued into a triangulation whose exchange quiver is the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .quiver import Quiver, is_connected
from .triangulation import Tri, Triangulation, arc, bnd, check, selffolded

__all__ = [
    "KINDS",
    "BlockKind",
    "Block",
    "BlockDecomposition",
    "Enumerated",
    "SearchBudgetExceeded",
    "enumerate_decompositions",
    "decomposition_to_triangulation",
    "is_unique",
    "Uniqueness",
    "superpose",
]


@dataclass(frozen=True)
class BlockKind:
    name: str
    size: int
    outlets: frozenset
    arrows: tuple[tuple[int, int], ...]


KINDS = {
    "I": BlockKind("I", 2, frozenset({0, 1}), ((0, 1),)),
    "II": BlockKind("II", 3, frozenset({0, 1, 2}), ((0, 1), (1, 2), (2, 0))),
    "IIIa": BlockKind("IIIa", 3, frozenset({0}), ((1, 0), (2, 0))),
    "IIIb": BlockKind("IIIb", 3, frozenset({0}), ((0, 1), (0, 2))),
    # slots: o1, o2, n1, n2
    "IV": BlockKind("IV", 4, frozenset({0, 1}), ((0, 2), (0, 3), (2, 1), (3, 1), (1, 0))),
    # slots: o, n1, n2, n3, n4
    "V": BlockKind("V", 5, frozenset({0}), ((0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 0), (4, 0))),
}
ALL_KINDS = tuple(KINDS)


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Block:
    kind: str
    vertices: tuple[int, ...]  # slot -> quiver vertex

    @property
    def shape(self) -> BlockKind:
        return KINDS[self.kind]

    def outlet_vertices(self) -> list[int]:
        return [v for s, v in enumerate(self.vertices) if s in self.shape.outlets]

    def inner_vertices(self) -> list[int]:
        return [v for s, v in enumerate(self.vertices) if s not in self.shape.outlets]

    def arrows(self) -> list[tuple[int, int]]:
        return [(self.vertices[s], self.vertices[t]) for s, t in self.shape.arrows]

    def key(self) -> tuple:
        return (self.kind, tuple(sorted(self.arrows())), tuple(sorted(self.outlet_vertices())))

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices)}


@dataclass(frozen=True)
class BlockDecomposition:
    n: int
    blocks: tuple[Block, ...]

    def key(self) -> tuple:
        return tuple(sorted(b.key() for b in self.blocks))

    def __eq__(self, other):
        return isinstance(other, BlockDecomposition) and self.n == other.n and self.key() == other.key()

    def __hash__(self):
        return hash((self.n, self.key()))

    @property
    def kinds(self) -> list[str]:
        return sorted(b.kind for b in self.blocks)

    def matched(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Outlet pairs ``((block, slot), (block, slot))`` glued at a shared vertex."""
        where: dict[int, list[tuple[int, int]]] = {}
        for bi, b in enumerate(self.blocks):
            for s, v in enumerate(b.vertices):
                if s in b.shape.outlets:
                    where.setdefault(v, []).append((bi, s))
        return [tuple(w) for v, w in sorted(where.items()) if len(w) == 2]

    def to_json(self) -> dict:
        return {
            "format": 1,
            "n": self.n,
            "blocks": [b.to_json() for b in self.blocks],
            "matched": [[list(a), list(b)] for a, b in self.matched()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BlockDecomposition":
        blocks = tuple(Block(b["kind"], tuple(b["vertices"])) for b in doc["blocks"])
        return cls(int(doc["n"]), blocks)


def superpose(n: int, blocks: Iterable[Block]) -> list[list[int]]:
    b = [[0] * n for _ in range(n)]
    for blk in blocks:
        for u, v in blk.arrows():
            b[u][v] += 1
            b[v][u] -= 1
    return b


def _is_valid_decomposition(q: Quiver, blocks: Sequence[Block]) -> bool:
    uses: dict[int, list[tuple[int, bool]]] = {}
    for bi, blk in enumerate(blocks):
        if len(set(blk.vertices)) != len(blk.vertices):
            return False
        for s, v in enumerate(blk.vertices):
            uses.setdefault(v, []).append((bi, s in blk.shape.outlets))
    if q.n > 1 and set(uses) != set(range(q.n)):
        return False
    for v, us in uses.items():
        if any(not outlet for _, outlet in us) and len(us) != 1:
            return False
        if len(us) > 2 or len({bi for bi, _ in us}) != len(us):
            return False
    return superpose(q.n, blocks) == q.signed()


@dataclass
class Enumerated:
    decompositions: list[BlockDecomposition]
    truncated: bool

    def __len__(self):
        return len(self.decompositions)

    def __iter__(self):
        return iter(self.decompositions)

    def __getitem__(self, i):
        return self.decompositions[i]


class _Search:
    def __init__(self, q: Quiver, kinds: Sequence[str], limit: int | None, budget: int | None):
        self.q = q
        self.n = q.n
        self.target = q.signed()
        self.kinds = [KINDS[k] for k in kinds]
        self.limit = limit
        self.budget = budget
        self.nodes = 0
        self.found: dict[tuple, BlockDecomposition] = {}
        self.truncated = False
        self.R = [row[:] for row in self.target]
        # use[v]: 0 free, 1/2 outlet uses, -1 non-outlet
        self.use = [0] * self.n
        self.owner: list[list[int]] = [[] for _ in range(self.n)]
        self.placed: list[Block] = []
        self.nbrs = [[u for u in range(self.n) if self.target[v][u]] for v in range(self.n)]

    def cap(self, v: int) -> int:
        u = self.use[v]
        return 0 if u < 0 else 2 - u

    def run(self):
        self._recurse()

    def _anchor(self):
        best = None
        for x in range(self.n):
            row = self.R[x]
            for y in range(self.n):
                r = row[y]
                if r > 0 and (best is None or r > best[0]):
                    best = (r, x, y)
        return best

    def _recurse(self):
        if self.limit is not None and len(self.found) >= self.limit:
            self.truncated = True
            return
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(f"block search exceeded {self.budget} nodes")
        anchor = self._anchor()
        if anchor is None:
            if all(u != 0 for u in self.use):
                d = BlockDecomposition(self.n, tuple(self.placed))
                self.found.setdefault(d.key(), d)
            return
        _, x, y = anchor
        seen = set()
        for blk in self._placements(x, y):
            k = blk.key()
            if k in seen:
                continue
            seen.add(k)
            if self._apply(blk):
                self._recurse()
            self._undo(blk)
            if self.limit is not None and len(self.found) >= self.limit:
                self.truncated = True
                return

    def _slot_ok(self, shape: BlockKind, s: int, v: int) -> bool:
        if s in shape.outlets:
            return 0 <= self.use[v] < 2
        return self.use[v] == 0

    def _placements(self, x: int, y: int):
        for shape in self.kinds:
            for s, t in shape.arrows:
                if not (self._slot_ok(shape, s, x) and self._slot_ok(shape, t, y)):
                    continue
                assign = [None] * shape.size
                assign[s], assign[t] = x, y
                yield from self._extend(shape, assign)

    def _extend(self, shape: BlockKind, assign: list):
        if all(a is not None for a in assign):
            yield Block(shape.name, tuple(assign))
            return
        # next slot joined by a block arrow to an assigned slot; candidates come from quiver arrows
        for slot in range(shape.size):
            if assign[slot] is not None:
                continue
            links = []
            for s, t in shape.arrows:
                if s == slot and assign[t] is not None:
                    links.append((assign[t], -1))
                elif t == slot and assign[s] is not None:
                    links.append((assign[s], +1))
            if links:
                break
        else:
            return
        cands = set()
        for v, direction in links:
            for u in self.nbrs[v]:
                # direction +1: arrow v -> u in the block
                if (self.target[v][u] > 0) == (direction > 0):
                    cands.add(u)
        used = set(a for a in assign if a is not None)
        for u in sorted(cands):
            if u in used or not self._slot_ok(shape, slot, u):
                continue
            # block arrows must never oppose a quiver arrow
            ok = True
            for s, t in shape.arrows:
                a = u if s == slot else assign[s]
                b = u if t == slot else assign[t]
                if a is not None and b is not None and self.target[a][b] < 0:
                    ok = False
                    break
            if not ok:
                continue
            assign[slot] = u
            yield from self._extend(shape, assign)
            assign[slot] = None

    def _apply(self, blk: Block) -> bool:
        shape = blk.shape
        for s, v in enumerate(blk.vertices):
            if s in shape.outlets:
                self.use[v] += 1
            else:
                self.use[v] = -1
            self.owner[v].append(len(self.placed))
        for u, v in blk.arrows():
            self.R[u][v] -= 1
            self.R[v][u] += 1
        self.placed.append(blk)
        return self._feasible(blk.vertices)

    def _undo(self, blk: Block):
        self.placed.pop()
        shape = blk.shape
        for u, v in blk.arrows():
            self.R[u][v] += 1
            self.R[v][u] -= 1
        for s, v in enumerate(blk.vertices):
            if s in shape.outlets:
                self.use[v] -= 1
            else:
                self.use[v] = 0
            self.owner[v].pop()

    def _feasible(self, touched) -> bool:
        for v in touched:
            cv = self.cap(v)
            row = self.R[v]
            for u in range(self.n):
                r = row[u]
                if r and abs(r) > min(cv, self.cap(u)):
                    return False
        return True


def enumerate_decompositions(
    q: Quiver,
    kinds: Iterable[str] = ALL_KINDS,
    limit: int | None = None,
    budget: int | None = 2_000_000,
) -> Enumerated:
    """All block decompositions of a connected quiver, without duplicates.

    Results are sorted by their canonical key.  ``limit`` caps the number of
    decompositions (setting ``truncated``); ``budget`` caps search nodes.
    """
    kinds = tuple(kinds)
    for k in kinds:
        if k not in KINDS:
            raise ValueError(f"unknown block kind {k!r}")
    if q.n == 0:
        return Enumerated([], False)
    if not is_connected(q):
        raise ValueError("block decompositions are only defined for connected quivers")
    if q.n == 1:
        return Enumerated([BlockDecomposition(1, ())], False)
    search = _Search(q, kinds, limit, budget)
    search.run()
    found = [search.found[k] for k in sorted(search.found)]
    for d in found:
        assert _is_valid_decomposition(q, d.blocks), d
    return Enumerated(found, search.truncated)


@dataclass
class Uniqueness:
    status: str  # "unique" | "multiple" | "none"
    decompositions: list[BlockDecomposition]

    @property
    def decomposition(self) -> BlockDecomposition | None:
        return self.decompositions[0] if self.status == "unique" else None


def is_unique(q: Quiver, budget: int | None = 2_000_000) -> Uniqueness:
    found = enumerate_decompositions(q, ALL_KINDS, None, budget).decompositions
    status = "none" if not found else "unique" if len(found) == 1 else "multiple"
    return Uniqueness(status, found)


def decomposition_to_triangulation(d: BlockDecomposition) -> Triangulation:
    """Glue the puzzle pieces of ``d``; arc ``i`` is quiver vertex ``i``."""
    tris: list[Tri] = []
    next_b = [0]

    def fresh():
        next_b[0] += 1
        return bnd(next_b[0] - 1)

    uses: dict[int, int] = {}
    for blk in d.blocks:
        v = blk.vertices
        for o in blk.outlet_vertices():
            uses[o] = uses.get(o, 0) + 1
        if blk.kind == "I":
            tris.append(Tri((arc(v[0]), arc(v[1]), fresh())))
        elif blk.kind == "II":
            tris.append(Tri((arc(v[0]), arc(v[1]), arc(v[2]))))
        elif blk.kind == "IIIa":
            tris += [Tri((arc(v[1]), arc(v[0]), fresh())), selffolded(v[1], v[2])]
        elif blk.kind == "IIIb":
            tris += [Tri((arc(v[0]), arc(v[1]), fresh())), selffolded(v[1], v[2])]
        elif blk.kind == "IV":
            tris += [Tri((arc(v[0]), arc(v[2]), arc(v[1]))), selffolded(v[2], v[3])]
        elif blk.kind == "V":
            tris += [Tri((arc(v[0]), arc(v[1]), arc(v[3]))), selffolded(v[1], v[2]), selffolded(v[3], v[4])]
        else:  # pragma: no cover
            raise ValueError(blk.kind)
    if d.n == 1 and not d.blocks:
        uses[0] = 0
        tris.append(Tri((arc(0), fresh(), fresh())))
    for o in sorted(uses):
        if uses[o] == 1 or (uses[o] == 0 and d.n == 1):
            tris.append(Tri((arc(o), fresh(), fresh())))
    return check(Triangulation(tuple(tris)))
