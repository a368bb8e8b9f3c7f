"""Local surgeries on triangulations used by the builder and the seed tables.

Every function returns a new normalised triangulation; none of them checks
maximality.  Corner ``i`` of a triangle is where side ``i - 1`` ends and
side ``i`` starts.
"""

from __future__ import annotations

from typing import Sequence

from .triangulation import Tri, Triangulation, TriangulationError, arc, bnd, plain, selffolded

__all__ = [
    "fresh_arc",
    "fresh_boundary",
    "from_vertex_cycles",
    "polygon_fan",
    "insert_puncture",
    "insert_boundary_component",
    "insert_boundary_monogon",
    "split_boundary",
    "split_wedge_into_cap",
    "once_punctured_digon",
    "annulus_11",
    "twice_punctured_monogon",
    "tetrahedron",
]


def fresh_arc(t: Triangulation, k: int = 1) -> list[int]:
    start = max(t.arcs, default=-1) + 1
    return list(range(start, start + k))


def fresh_boundary(t: Triangulation, k: int = 1) -> list[int]:
    start = max(t.boundary, default=-1) + 1
    return list(range(start, start + k))


def _replace(t: Triangulation, index: int, new: Sequence[Tri], arcs=(), boundary=(), drop_boundary=()) -> Triangulation:
    tris = [tr for k, tr in enumerate(t.triangles) if k != index] + list(new)
    return Triangulation(
        tuple(tris),
        frozenset(t.arcs) | set(arcs),
        (frozenset(t.boundary) - set(drop_boundary)) | set(boundary),
    )


def from_vertex_cycles(cycles: Sequence[Sequence[int]]) -> Triangulation:
    """Triangulation of a closed surface given by oriented vertex triples.

    Each undirected edge becomes an arc; it must appear once in each direction.
    """
    ids: dict[frozenset, int] = {}
    tris = []
    for cyc in cycles:
        sides = []
        for i in range(3):
            e = frozenset((cyc[i], cyc[(i + 1) % 3]))
            sides.append(arc(ids.setdefault(e, len(ids))))
        tris.append(Tri(tuple(sides)))
    return Triangulation(tuple(tris))


def polygon_fan(edges: Sequence[tuple], apex: int = 0) -> Triangulation:
    """Fan triangulation of a polygon whose sides are glued according to ``edges``.

    ``edges[i]`` is the side from polygon vertex ``i`` to ``i + 1``, given as
    ``("a", id)`` (glued to the other side with the same id, reversed) or
    ``("b", id)``.  Diagonals from vertex ``apex`` receive fresh arc ids.
    """
    m = len(edges)
    if m < 3:
        raise TriangulationError("polygon needs at least 3 sides")
    edges = [tuple(e) for e in edges[apex:]] + [tuple(e) for e in edges[:apex]]
    used = [e[1] for e in edges if e[0] == "a"]
    nxt = max(used, default=-1) + 1
    diag = {k: arc(nxt + k - 2) for k in range(2, m - 1)}
    tris = []
    for k in range(1, m - 1):
        left = edges[0] if k == 1 else diag[k]
        right = edges[m - 1] if k == m - 2 else diag[k + 1]
        tris.append(Tri((left, edges[k], right)))
    return Triangulation(tuple(tris))


def insert_puncture(t: Triangulation, index: int) -> Triangulation:
    """Put a new puncture inside a plain triangle and join it to the corners."""
    tr = t.triangles[index]
    if tr.folded:
        raise TriangulationError("cannot subdivide a self-folded triangle")
    s0, s1, s2 = tr.sides
    u0, u1, u2 = (arc(i) for i in fresh_arc(t, 3))
    new = [Tri((s0, u1, u0)), Tri((s1, u2, u1)), Tri((s2, u0, u2))]
    return _replace(t, index, new, arcs=[u0[1], u1[1], u2[1]])


def insert_boundary_component(t: Triangulation, index: int) -> Triangulation:
    """Put a hole with one marked point inside a plain triangle.

    The marked point is joined to the three corners, twice to corner 0 so that
    the two arcs bound a wedge around the hole.
    """
    tr = t.triangles[index]
    if tr.folded:
        raise TriangulationError("cannot insert into a self-folded triangle")
    s0, s1, s2 = tr.sides
    u, u2, x, y = (arc(i) for i in fresh_arc(t, 4))
    beta = bnd(fresh_boundary(t)[0])
    new = [Tri((s0, x, u)), Tri((s1, y, x)), Tri((s2, u2, y)), Tri((beta, u2, u))]
    return _replace(t, index, new, arcs=[u[1], u2[1], x[1], y[1]], boundary=[beta[1]])


def insert_boundary_monogon(t: Triangulation, index: int, corner: int = 0) -> Triangulation:
    """Turn the vertex at ``corner`` into a boundary point by cutting a hole next to it.

    The vertex must be a puncture; the hole is bounded by a single segment.
    """
    tr = t.triangles[index]
    if tr.folded:
        raise TriangulationError("cannot insert into a self-folded triangle")
    sides = tr.sides[corner:] + tr.sides[:corner]
    s0, s1, s2 = sides
    e = arc(fresh_arc(t)[0])
    beta = bnd(fresh_boundary(t)[0])
    new = [Tri((beta, s0, e)), Tri((e, s1, s2))]
    return _replace(t, index, new, arcs=[e[1]], boundary=[beta[1]])


def split_boundary(t: Triangulation, seg: int) -> Triangulation:
    """Add a marked point on boundary segment ``seg`` and join it to the opposite corner."""
    (index, si), = t.slots[bnd(seg)]
    tr = t.triangles[index]
    _, x, y = tr.sides[si:] + tr.sides[:si]
    g = arc(fresh_arc(t)[0])
    b1, b2 = (bnd(i) for i in fresh_boundary(t, 2))
    new = [Tri((b1, g, y)), Tri((b2, x, g))]
    return _replace(t, index, new, arcs=[g[1]], boundary=[b1[1], b2[1]], drop_boundary=[seg])


def split_wedge_into_cap(t: Triangulation, seg: int) -> Triangulation:
    """Add a marked point on ``seg`` and cut off the new digon by an arc parallel to ``seg``."""
    (index, si), = t.slots[bnd(seg)]
    tr = t.triangles[index]
    _, x, y = tr.sides[si:] + tr.sides[:si]
    g = arc(fresh_arc(t)[0])
    b1, b2 = (bnd(i) for i in fresh_boundary(t, 2))
    new = [Tri((b1, b2, g)), Tri((g, x, y))]
    return _replace(t, index, new, arcs=[g[1]], boundary=[b1[1], b2[1]], drop_boundary=[seg])


def once_punctured_digon() -> Triangulation:
    return Triangulation((plain("b0", "a0", "a1"), plain("b1", "a1", "a0")))


def annulus_11() -> Triangulation:
    return Triangulation((plain("b0", "a0", "a1"), plain("b1", "a0", "a1")))


def twice_punctured_monogon() -> Triangulation:
    return Triangulation((plain("b0", "a0", "a2"), selffolded(0, 1), selffolded(2, 3)))


def tetrahedron() -> Triangulation:
    return from_vertex_cycles([(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)])
