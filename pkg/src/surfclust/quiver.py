"""Exchange quivers: storage, mutation, isomorphism and canonical forms.

A quiver is kept as a square matrix of non-negative arrow multiplicities with
no loops and no oriented 2-cycles.  The signed exchange matrix
``b[i][j] = mult[i][j] - mult[j][i]`` is only ever a view.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Sequence

__all__ = [
    "Quiver",
    "QuiverError",
    "mutate",
    "edge_count",
    "opposite",
    "find_isomorphism",
    "canonical_form",
    "automorphism_count",
    "is_connected",
    "AUTOMORPHISM_LIMIT",
    "random_quiver",
]

AUTOMORPHISM_LIMIT = 40


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    """Immutable quiver on vertices ``0..n-1``.

    ``labels`` optionally names the vertices (arc identifiers for exchange
    quivers).  Equality compares labels and multiplicities.
    """

    mult: tuple[tuple[int, ...], ...]
    labels: tuple[Hashable, ...] | None = None
    n: int = field(init=False)

    def __post_init__(self):
        mult = tuple(tuple(int(x) for x in row) for row in self.mult)
        n = len(mult)
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "n", n)
        for i, row in enumerate(mult):
            if len(row) != n:
                raise QuiverError("multiplicity matrix must be square")
            if row[i] != 0:
                raise QuiverError(f"loop at vertex {i}")
            for j, m in enumerate(row):
                if m < 0:
                    raise QuiverError(f"negative multiplicity at ({i}, {j})")
                if m and mult[j][i]:
                    raise QuiverError(f"2-cycle between {i} and {j}")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise QuiverError("one label per vertex required")
            if len(set(labels)) != n:
                raise QuiverError("labels must be distinct")
            object.__setattr__(self, "labels", labels)

    # -- constructors -----------------------------------------------------

    @classmethod
    def empty(cls, n: int, labels=None) -> "Quiver":
        return cls(tuple((0,) * n for _ in range(n)), labels)

    @classmethod
    def from_arrows(cls, n: int, arrows: Iterable[Sequence[int]], labels=None) -> "Quiver":
        """Build from ``(i, j)`` or ``(i, j, m)`` triples; opposite arrows cancel."""
        b = [[0] * n for _ in range(n)]
        for arrow in arrows:
            i, j = arrow[0], arrow[1]
            m = arrow[2] if len(arrow) > 2 else 1
            if not (0 <= i < n and 0 <= j < n):
                raise QuiverError(f"arrow ({i}, {j}) out of range")
            if i == j:
                raise QuiverError(f"loop at vertex {i}")
            b[i][j] += m
            b[j][i] -= m
        return cls.from_signed(b, labels)

    @classmethod
    def from_signed(cls, b: Sequence[Sequence[int]], labels=None) -> "Quiver":
        n = len(b)
        for i in range(n):
            for j in range(n):
                if b[i][j] != -b[j][i]:
                    raise QuiverError("signed matrix is not skew-symmetric")
        return cls(tuple(tuple(max(int(b[i][j]), 0) for j in range(n)) for i in range(n)), labels)

    # -- views ------------------------------------------------------------

    def signed(self) -> list[list[int]]:
        m = self.mult
        return [[m[i][j] - m[j][i] for j in range(self.n)] for i in range(self.n)]

    def arrows(self) -> list[tuple[int, int, int]]:
        return [(i, j, m) for i, row in enumerate(self.mult) for j, m in enumerate(row) if m]

    def index(self, label) -> int:
        if self.labels is None:
            raise QuiverError("quiver has no labels")
        try:
            return self.labels.index(label)
        except ValueError:
            raise QuiverError(f"no vertex labelled {label!r}") from None

    def label(self, i: int):
        return i if self.labels is None else self.labels[i]

    def relabel(self, labels) -> "Quiver":
        return Quiver(self.mult, labels)

    def permute(self, order: Sequence[int]) -> "Quiver":
        """Quiver whose vertex ``k`` is vertex ``order[k]`` of this one."""
        labels = None if self.labels is None else tuple(self.labels[v] for v in order)
        return Quiver(tuple(tuple(self.mult[u][v] for v in order) for u in order), labels)

    def induced(self, vertices: Sequence[int]) -> "Quiver":
        return self.permute(vertices)

    @property
    def edge_count(self) -> int:
        return sum(map(sum, self.mult))

    # -- serialisation ----------------------------------------------------

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines += [f"{i} {j} {m}" for i, j, m in self.arrows()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Quiver":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 1:
            raise QuiverError("first line must hold the vertex count")
        n = int(rows[0][0])
        arrows = []
        for r in rows[1:]:
            if len(r) != 3:
                raise QuiverError(f"bad arrow line: {' '.join(r)!r}")
            arrows.append(tuple(int(x) for x in r))
        b = [[0] * n for _ in range(n)]
        for i, j, m in arrows:
            if not (0 <= i < n and 0 <= j < n) or m < 0:
                raise QuiverError(f"bad arrow {i} {j} {m}")
            if b[i][j] < 0 or b[j][i] > 0:
                raise QuiverError(f"arrows both ways between {i} and {j}")
            b[i][j] += m
            b[j][i] -= m
        return cls.from_signed(b)

    def to_json(self) -> dict:
        doc = {"format": 1, "n": self.n, "arrows": [list(a) for a in self.arrows()]}
        if self.labels is not None:
            doc["labels"] = list(self.labels)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Quiver":
        if doc.get("format", 1) != 1:
            raise QuiverError(f"unsupported quiver format {doc.get('format')!r}")
        n = int(doc["n"])
        labels = doc.get("labels")
        b = [[0] * n for _ in range(n)]
        for i, j, m in doc.get("arrows", []):
            if b[j][i] > 0 or b[i][j] < 0:
                raise QuiverError(f"arrows both ways between {i} and {j}")
            b[i][j] += m
            b[j][i] -= m
        return cls.from_signed(b, None if labels is None else tuple(labels))

    @classmethod
    def parse(cls, text: str) -> "Quiver":
        """Accept either the JSON document or the plain text format."""
        stripped = text.lstrip()
        if stripped.startswith("{"):
            return cls.from_json(json.loads(text))
        return cls.from_text(text)

    def to_dot(self, name: str = "Q") -> str:
        out = [f"digraph {name} {{"]
        for i in range(self.n):
            out.append(f'  {i} [label="{self.label(i)}"];')
        for i, j, m in self.arrows():
            attr = f' [label="{m}"]' if m > 1 else ""
            out.append(f"  {i} -> {j}{attr};")
        out.append("}")
        return "\n".join(out) + "\n"

    def __repr__(self):
        arrows = ", ".join(f"{self.label(i)}->{self.label(j)}" + (f"x{m}" if m > 1 else "") for i, j, m in self.arrows())
        return f"Quiver(n={self.n}, [{arrows}])"


def edge_count(q: Quiver) -> int:
    return q.edge_count


def mutate(q: Quiver, k: int) -> Quiver:
    """Mutate ``q`` at vertex ``k``.

    Matrix form of the three-step rule: compose paths through ``k``, reverse
    the arrows at ``k``, cancel 2-cycles.
    """
    n = q.n
    if not isinstance(k, int) or not (0 <= k < n):
        raise IndexError(f"vertex {k!r} out of range for quiver on {n} vertices")
    b = q.signed()
    out = [row[:] for row in b]
    for i in range(n):
        if i == k:
            continue
        bik = b[i][k]
        for j in range(n):
            if j == k or j == i:
                continue
            bkj = b[k][j]
            if bik > 0 and bkj > 0:
                out[i][j] = b[i][j] + bik * bkj
            elif bik < 0 and bkj < 0:
                out[i][j] = b[i][j] - bik * bkj
    for i in range(n):
        out[i][k] = -b[i][k]
        out[k][i] = -b[k][i]
    return Quiver.from_signed(out, q.labels)


def random_quiver(rng, n: int, max_mult: int = 3, density: float = 0.5) -> Quiver:
    """A quiver on ``n`` vertices drawn from ``rng`` (a ``random.Random``)."""
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                m = rng.randint(1, max_mult)
                if rng.random() < 0.5:
                    m = -m
                b[i][j], b[j][i] = m, -m
    return Quiver.from_signed(b)


def opposite(q: Quiver) -> Quiver:
    n = q.n
    return Quiver(tuple(tuple(q.mult[j][i] for j in range(n)) for i in range(n)), q.labels)


def is_connected(q: Quiver) -> bool:
    if q.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in range(q.n):
            if v not in seen and (q.mult[u][v] or q.mult[v][u]):
                seen.add(v)
                stack.append(v)
    return len(seen) == q.n


# -- colour refinement ---------------------------------------------------------


def _neighbourhoods(q: Quiver) -> list[list[tuple[int, int, int]]]:
    nb = []
    for v in range(q.n):
        nb.append([(u, q.mult[v][u], q.mult[u][v]) for u in range(q.n) if q.mult[v][u] or q.mult[u][v]])
    return nb


def _initial_colours(qs: Sequence[Quiver]) -> list[list[int]]:
    keys = []
    for q in qs:
        row = []
        for v in range(q.n):
            outs = sorted(m for m in q.mult[v] if m)
            ins = sorted(q.mult[u][v] for u in range(q.n) if q.mult[u][v])
            row.append((sum(outs), sum(ins), tuple(outs), tuple(ins)))
        keys.append(row)
    return _rank(keys)


def _rank(keys: list[list]) -> list[list[int]]:
    order = {k: r for r, k in enumerate(sorted({k for row in keys for k in row}))}
    return [[order[k] for k in row] for row in keys]


def _refine(nbs, colours: list[list[int]]) -> list[list[int]]:
    """Iterate neighbourhood refinement jointly over several quivers."""
    count = len({c for row in colours for c in row})
    while True:
        keys = []
        for nb, col in zip(nbs, colours):
            keys.append([(col[v], tuple(sorted((col[u], a, b) for u, a, b in nb[v]))) for v in range(len(col))])
        colours = _rank(keys)
        new_count = len({c for row in colours for c in row})
        if new_count == count:
            return colours
        count = new_count


def _individualise(colours: list[int], v: int) -> list[int]:
    return [2 * c + (0 if x == v else 1) for x, c in enumerate(colours)]


def _cells(colours: list[int]) -> dict[int, list[int]]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        cells.setdefault(c, []).append(v)
    return cells


def _target_cell(cells: dict[int, list[int]]) -> int | None:
    best = None
    for c, vs in cells.items():
        if len(vs) > 1 and (best is None or (len(vs), c) < (len(cells[best]), best)):
            best = c
    return best


# -- isomorphism ---------------------------------------------------------------


def _iso_search(q1, q2, nb1, nb2, c1, c2) -> Iterator[list[int]]:
    c1, c2 = _refine([nb1, nb2], [c1, c2])
    if sorted(c1) != sorted(c2):
        return
    cells1, cells2 = _cells(c1), _cells(c2)
    target = _target_cell(cells1)
    if target is None:
        pos = {c: u for u, c in enumerate(c2)}
        phi = [pos[c] for c in c1]
        if all(q1.mult[i][j] == q2.mult[phi[i]][phi[j]] for i in range(q1.n) for j in range(q1.n)):
            yield phi
        return
    v = cells1[target][0]
    for u in cells2[target]:
        yield from _iso_search(q1, q2, nb1, nb2, _individualise(c1, v), _individualise(c2, u))


def _isomorphisms(q1: Quiver, q2: Quiver) -> Iterator[list[int]]:
    if q1.n != q2.n or q1.edge_count != q2.edge_count:
        return
    if q1.n == 0:
        yield []
        return
    c1, c2 = _initial_colours([q1, q2])
    yield from _iso_search(q1, q2, _neighbourhoods(q1), _neighbourhoods(q2), c1, c2)


def find_isomorphism(q1: Quiver, q2: Quiver) -> list[int] | None:
    """Return ``phi`` with ``q1.mult[i][j] == q2.mult[phi[i]][phi[j]]``, or None."""
    return next(_isomorphisms(q1, q2), None)


def automorphism_count(q: Quiver, limit: int = AUTOMORPHISM_LIMIT) -> int:
    """Order of the automorphism group, via a stabiliser chain."""
    if q.n > limit:
        raise QuiverError(f"automorphism count limited to {limit} vertices, got {q.n}")
    if q.n == 0:
        return 1
    nb = _neighbourhoods(q)
    (colours,) = _initial_colours([q])
    total = 1
    while True:
        (colours,) = _refine([nb], [colours])
        cells = _cells(colours)
        target = _target_cell(cells)
        if target is None:
            return total
        v = cells[target][0]
        orbit = 1
        for u in cells[target][1:]:
            ok = next(_iso_search(q, q, nb, nb, _individualise(colours, v), _individualise(colours, u)), None)
            if ok is not None:
                orbit += 1
        total *= orbit
        colours = _individualise(colours, v)


# -- canonical form ------------------------------------------------------------


def _twins(q: Quiver, cell: list[int]) -> bool:
    """True when every transposition inside ``cell`` is an automorphism."""
    first = cell[0]
    for other in cell[1:]:
        if q.mult[first][other] or q.mult[other][first]:
            return False
        for w in range(q.n):
            if w in (first, other):
                continue
            if q.mult[first][w] != q.mult[other][w] or q.mult[w][first] != q.mult[w][other]:
                return False
    return True


def canonical_form(q: Quiver) -> tuple[list[int], str]:
    """Return ``(order, certificate)``.

    ``order[k]`` is the vertex placed at canonical position ``k``; the
    certificate encodes the permuted multiplicity matrix and is equal for two
    quivers exactly when they are isomorphic.  Labels are ignored.
    """
    if q.n == 0:
        return [], "0|"
    nb = _neighbourhoods(q)
    (start,) = _initial_colours([q])
    best: list = [None, None]

    def leaf_key(order):
        return tuple(q.mult[u][v] for u in order for v in order)

    def search(colours):
        (colours,) = _refine([nb], [colours])
        cells = _cells(colours)
        target = _target_cell(cells)
        if target is None:
            order = sorted(range(q.n), key=lambda v: colours[v])
            key = leaf_key(order)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, order
            return
        cell = cells[target]
        branches = cell[:1] if _twins(q, cell) else cell
        for v in branches:
            search(_individualise(colours, v))

    search(start)
    order = best[1]
    cert = ";".join(f"{i},{j},{m}" for i, u in enumerate(order) for j, v in enumerate(order) if (m := q.mult[u][v]))
    return order, f"{q.n}|{cert}"
