"""Connected maximal triangulations with at least two faces, built step by step.

A build starts from a base triangulation of the right genus and then applies
three local moves: insert a puncture into a face, insert a boundary component
with one marked point into a face, and add a marked point to an existing
boundary component.  Each move keeps the triangulation maximal and its face
graph connected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import surgery
from .surface import (
    NO_CONNECTED_MAX_2FACES,
    NO_CONNECTED_MAX_2FACES_ITEMS,
    SignatureError,
    SurfaceSig,
    is_valid,
)
from .triangulation import (
    Kind,
    Triangulation,
    TriangulationError,
    bnd,
    check,
    is_connected_max_2faces,
    plain,
    surface_signature,
    triangle_kind,
)

__all__ = [
    "BuildPlan",
    "Step",
    "ExceptionSurface",
    "BuildError",
    "base_library",
    "base_triangulation",
    "add_puncture",
    "add_boundary_punctured_component",
    "add_boundary_marked_point",
    "plan_build",
    "execute",
    "build_max_connected",
    "seed_triangulation",
]


class BuildError(RuntimeError):
    pass


class ExceptionSurface(ValueError):
    """The surface has no connected maximal triangulation with two or more faces."""

    def __init__(self, sig: SurfaceSig, item: int):
        self.sig = sig
        self.item = item
        super().__init__(
            f"{sig} has no connected maximal triangulation with at least 2 faces "
            f"(exception item {item}: {NO_CONNECTED_MAX_2FACES_ITEMS[item]})"
        )


# Literal bases.  Found by flip search from hand-made seeds and checked by the test suite.
_EXCEPTIONAL_BASES = {
    (0, 0, (8,)): [
        ("a0", "a1", "a2"), ("a0", "b0", "b1"), ("a1", "b2", "b3"),
        ("a2", "a3", "a4"), ("a3", "b4", "b5"), ("a4", "b6", "b7"),
    ],
    (0, 1, (5,)): [
        ("a0", "a3", "a2"), ("a0", "b0", "b1"), ("a1", "a4", "a3"),
        ("a1", "b2", "b3"), ("a2", "a4", "b4"),
    ],
    (0, 2, (3,)): [
        ("a0", "a3", "a2"), ("a0", "b0", "a1"), ("a1", "a4", "a3"),
        ("a2", "a4", "a5"), ("a5", "b1", "b2"),
    ],
    (0, 3, (1,)): [
        ("a0", "a4", "a1"), ("a0", "a5", "a2"), ("a1", "a3", "a5"),
        ("a2", "a3", "a6"), ("a4", "a6", "b0"),
    ],
    (0, 4, ()): [
        ("a0", "a1", "a2"), ("a2", "a3", "a4"), ("a4", "a5", "a0"), ("a1", "a5", "a3"),
    ],
    (0, 5, ()): [
        ("a0", "a4", "a5"), ("a0", "a7", "a6"), ("a1", "a5", "a3"),
        ("a1", "a8", "a7"), ("a2", "a3", "a4"), ("a2", "a6", "a8"),
    ],
    (0, 0, (4, 1)): [
        ("a0", "a1", "b0"), ("a0", "a3", "a4"), ("a1", "a2", "a3"),
        ("a2", "b1", "b2"), ("a4", "b3", "b4"),
    ],
    (0, 0, (2, 2)): [
        ("a0", "a1", "a2"), ("a0", "a1", "a3"), ("a2", "b0", "b1"), ("a3", "b2", "b3"),
    ],
    (0, 1, (1, 1)): [
        ("a0", "a1", "b1"), ("a0", "a3", "a2"), ("a1", "a4", "a3"), ("a2", "a4", "b0"),
    ],
    (0, 0, (1, 1, 1)): [
        ("a0", "a1", "b1"), ("a0", "a4", "a2"), ("a1", "a5", "a4"),
        ("a2", "b2", "a3"), ("a3", "a5", "b0"),
    ],
}


def _genus_closed(g: int) -> Triangulation:
    word = []
    for i in range(g):
        word += [("a", 2 * i), ("a", 2 * i + 1), ("a", 2 * i), ("a", 2 * i + 1)]
    return surgery.polygon_fan(word, 0)


def _genus_bordered(g: int) -> Triangulation:
    return surgery.insert_boundary_monogon(_genus_closed(g), 0, 0)


@lru_cache(maxsize=None)
def base_triangulation(sig: SurfaceSig) -> Triangulation:
    key = sig.key
    if key in _EXCEPTIONAL_BASES:
        t = Triangulation(tuple(plain(*s) for s in _EXCEPTIONAL_BASES[key]))
    elif sig.g >= 1 and sig.p == 1 and not sig.h:
        t = _genus_closed(sig.g)
    elif sig.g >= 1 and sig.p == 0 and sig.h == (1,):
        t = _genus_bordered(sig.g)
    else:
        raise BuildError(f"no base triangulation for {sig}")
    return Triangulation(t.triangles, t.arcs, t.boundary, sig)


def base_library(max_genus: int = 3) -> dict[SurfaceSig, Triangulation]:
    """Exceptional bases plus the two genus families up to ``max_genus``."""
    sigs = [SurfaceSig(g, p, h) for g, p, h in _EXCEPTIONAL_BASES]
    for g in range(1, max_genus + 1):
        sigs += [SurfaceSig(g, 1, ()), SurfaceSig(g, 0, (1,))]
    return {s: base_triangulation(s) for s in sigs}


# -- moves ---------------------------------------------------------------------


def _require_face(t: Triangulation, face: int) -> None:
    if not 0 <= face < len(t.triangles) or triangle_kind(t, face) is not Kind.FACE:
        raise BuildError(f"triangle {face} is not a face")


def add_puncture(t: Triangulation, face: int) -> Triangulation:
    _require_face(t, face)
    return surgery.insert_puncture(t, face)


def add_boundary_punctured_component(t: Triangulation, face: int) -> Triangulation:
    _require_face(t, face)
    return surgery.insert_boundary_component(t, face)


def _component_of(t: Triangulation, seg: int) -> tuple[int, ...]:
    for cyc in t.topology.boundary_cycles:
        if seg in cyc:
            return cyc
    raise BuildError(f"no boundary segment {seg}")


def _add_point(t: Triangulation, seg: int) -> tuple[Triangulation, int]:
    """Add a marked point to the component containing ``seg``; return the new representative."""
    cyc = set(_component_of(t, seg))
    new_rep = surgery.fresh_boundary(t)[0]
    if len(cyc) % 2 == 0:
        caps = [
            i for i, tr in enumerate(t.triangles)
            if triangle_kind(t, i) is Kind.CAP and any(s[0] == "b" and s[1] in cyc for s in tr.sides)
        ]
        if not caps:
            raise BuildError("even component without a cap; input is not maximal")
        beta = next(s[1] for s in t.triangles[caps[0]].sides if s[0] == "b")
        return surgery.split_boundary(t, beta), new_rep
    wedges = [
        i for i, tr in enumerate(t.triangles)
        if triangle_kind(t, i) is Kind.WEDGE and any(s[0] == "b" and s[1] in cyc for s in tr.sides)
    ]
    if len(wedges) != 1:
        raise BuildError(f"odd component with {len(wedges)} wedges; input is not maximal")
    beta = next(s[1] for s in t.triangles[wedges[0]].sides if s[0] == "b")
    return surgery.split_wedge_into_cap(t, beta), new_rep


def add_boundary_marked_point(t: Triangulation, component: int) -> Triangulation:
    """``component`` indexes ``t.topology.boundary_cycles``."""
    cycles = t.topology.boundary_cycles
    if not 0 <= component < len(cycles):
        raise BuildError(f"no boundary component {component}")
    return _add_point(t, cycles[component][0])[0]


# -- planning ------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    op: str  # "puncture" | "component" | "point"
    target: int = 0  # component slot for "point"

    def __str__(self):
        return self.op if self.op != "point" else f"point@{self.target}"


@dataclass(frozen=True)
class BuildPlan:
    sig: SurfaceSig
    base: SurfaceSig
    steps: tuple[Step, ...] = field(default=())

    def log(self) -> list[str]:
        out = [f"base {self.base}"]
        counts: dict[str, int] = {}
        for s in self.steps:
            counts[str(s)] = counts.get(str(s), 0) + 1
        out += [f"{k} x{v}" for k, v in counts.items()]
        return out


def _base_candidates(sig: SurfaceSig) -> list[SurfaceSig]:
    if sig.g >= 1:
        return [SurfaceSig(sig.g, 1, ())] if sig.p >= 1 else [SurfaceSig(sig.g, 0, (1,))]
    return [SurfaceSig(g, p, h) for g, p, h in _EXCEPTIONAL_BASES]


def _fits(base: SurfaceSig, sig: SurfaceSig) -> bool:
    if base.g != sig.g or base.p > sig.p or base.b > sig.b:
        return False
    return all(x <= y for x, y in zip(base.h, sig.h))


def plan_build(sig: SurfaceSig) -> BuildPlan:
    if not is_valid(sig):
        raise SignatureError(f"{sig} is not an admissible surface")
    item = NO_CONNECTED_MAX_2FACES.get(sig.key)
    if item is not None:
        raise ExceptionSurface(sig, item)
    fitting = [b for b in _base_candidates(sig) if _fits(b, sig)]
    if not fitting:
        raise BuildError(f"no base fits {sig}")
    # closest base: fewest remaining steps
    base = min(fitting, key=lambda b: (-(3 * b.p + 4 * b.b + sum(b.h)), b.key))
    steps = [Step("component")] * (sig.b - base.b) + [Step("puncture")] * (sig.p - base.p)
    current = list(base.h) + [1] * (sig.b - base.b)
    for slot, (have, want) in enumerate(zip(current, sig.h)):
        steps += [Step("point", slot)] * (want - have)
    return BuildPlan(sig, base, tuple(steps))


def _first_face(t: Triangulation) -> int:
    return next(i for i in range(len(t.triangles)) if triangle_kind(t, i) is Kind.FACE)


def execute(plan: BuildPlan) -> Triangulation:
    t = base_triangulation(plan.base)
    t = Triangulation(t.triangles, t.arcs, t.boundary)
    # component slots follow the descending order of the base's boundary sizes
    cycles = sorted(t.topology.boundary_cycles, key=lambda c: (-len(c), c))
    reps = [c[0] for c in cycles]
    for step in plan.steps:
        if step.op == "component":
            new_seg = surgery.fresh_boundary(t)[0]
            t = add_boundary_punctured_component(t, _first_face(t))
            reps.append(new_seg)
        elif step.op == "puncture":
            t = add_puncture(t, _first_face(t))
        else:
            t, reps[step.target] = _add_point(t, reps[step.target])
    t = Triangulation(t.triangles, t.arcs, t.boundary, plan.sig)
    return check(t)


def build_max_connected(sig: SurfaceSig) -> Triangulation:
    t = execute(plan_build(sig))
    if surface_signature(t) != sig or not is_connected_max_2faces(t):
        raise BuildError(f"construction for {sig} failed its own check")
    return t


# -- seeds for enumeration -----------------------------------------------------


def _seed_generic(sig: SurfaceSig) -> Triangulation:
    g, p, h = sig.g, sig.p, list(sig.h)
    if g == 0 and not h:
        t = surgery.tetrahedron()
        for _ in range(p - 4):
            t = surgery.insert_puncture(t, 0)
        return t
    if g >= 1:
        t = _genus_closed(g) if p >= 1 else _genus_bordered(g)
        start = [] if p >= 1 else [1]
        p_left = p - 1 if p >= 1 else 0
    elif p == 0 and len(h) == 1:
        return surgery.polygon_fan([bnd(i) for i in range(h[0])])
    elif p == 0:
        t, start, p_left = surgery.annulus_11(), [1, 1], 0
    elif h[0] >= 2:
        t, start, p_left = surgery.once_punctured_digon(), [2], p - 1
    elif len(h) >= 2:
        t, start, p_left = surgery.annulus_11(), [1, 1], p
    else:
        t, start, p_left = surgery.twice_punctured_monogon(), [1], p - 2
    cycles = sorted(t.topology.boundary_cycles, key=lambda c: (-len(c), c))
    reps = [c[0] for c in cycles]
    for _ in range(len(h) - len(start)):
        reps.append(surgery.fresh_boundary(t)[0])
        t = surgery.insert_boundary_component(t, _first_plain(t))
    for _ in range(p_left):
        t = surgery.insert_puncture(t, _first_plain(t))
    sizes = start + [1] * (len(h) - len(start))
    for slot, (have, want) in enumerate(zip(sizes, h)):
        for _ in range(want - have):
            nxt = surgery.fresh_boundary(t)[0]
            t = surgery.split_boundary(t, reps[slot])
            reps[slot] = nxt
    return t


def _first_plain(t: Triangulation) -> int:
    return next(i for i, tr in enumerate(t.triangles) if not tr.folded)


def seed_triangulation(sig: SurfaceSig) -> Triangulation:
    """Some triangulation of ``sig``: the builder's output when available."""
    if not is_valid(sig):
        raise SignatureError(f"{sig} is not an admissible surface")
    if sig.key not in NO_CONNECTED_MAX_2FACES:
        return build_max_connected(sig)
    t = _seed_generic(sig)
    if surface_signature(t) != sig:
        raise TriangulationError(f"seed construction produced {surface_signature(t)} instead of {sig}")
    return Triangulation(t.triangles, t.arcs, t.boundary, sig)
