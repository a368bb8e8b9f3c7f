"""Tagged triangulations.

A tagged triangulation is stored as an ordinary triangulation ``base`` (which
may contain self-folded triangles) together with the set ``notched`` of
punctures where every tag has been changed.  The tagged arcs are generated
from this data, not stored: the loop of a self-folded triangle at ``y``
becomes a copy of its radius notched at ``y``, then every end lying in
``notched`` switches tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .quiver import Quiver
from .triangulation import (
    Triangulation,
    check,
    exchange_quiver as _ordinary_quiver,
    relabel_arcs,
)

__all__ = [
    "TaggedArc",
    "TaggedTriangulation",
    "TaggedError",
    "tau",
    "to_ordinary",
    "retag",
    "delta_signature",
    "exchange_quiver",
    "PLAIN",
    "NOTCHED",
]

PLAIN = "plain"
NOTCHED = "notched"


class TaggedError(ValueError):
    pass


@dataclass(frozen=True)
class TaggedArc:
    """A tagged arc: label, underlying arc of the base, and a tag per endpoint."""

    label: int
    underlying: int
    ends: tuple[int, int]
    tags: tuple[str, str]

    def tag_at(self, y: int) -> str | None:
        for v, tg in zip(self.ends, self.tags):
            if v == y:
                return tg
        return None


@dataclass(frozen=True)
class TaggedTriangulation:
    base: Triangulation
    notched: frozenset = frozenset()

    def __post_init__(self):
        check(self.base)
        notched = frozenset(self.notched)
        object.__setattr__(self, "notched", notched)
        top = self.base.topology
        stray = notched - set(top.punctures)
        if stray:
            raise TaggedError(f"tags can only change at punctures; {sorted(stray)} are not punctures")
        sig = top.sig
        if notched and sig.p == 1 and not sig.h:
            raise TaggedError("tags are always plain on a once-punctured closed surface")

    @property
    def punctures(self) -> tuple[int, ...]:
        return self.base.topology.punctures

    def tagged_arcs(self) -> list[TaggedArc]:
        base = self.base
        loops = base.loops
        radius_puncture = {}
        for tr_index, tr in enumerate(base.triangles):
            if tr.folded:
                radius_puncture[tr.radius] = base.topology.corner_vertex[tr_index][2]
        out = []
        for a in sorted(base.arcs):
            under = loops.get(a, a)
            ends = base.arc_ends(under)
            tags = [PLAIN, PLAIN]
            if a in loops:
                y = radius_puncture[under]
                tags = [NOTCHED if v == y else PLAIN for v in ends]
            tags = [_swap(tg) if v in self.notched else tg for v, tg in zip(ends, tags)]
            out.append(TaggedArc(a, under, ends, tuple(tags)))
        return out

    def tag_list(self) -> list[list]:
        """Notched ends as ``[arc, puncture, "notched"]`` entries."""
        out = []
        for ta in self.tagged_arcs():
            seen = set()
            for v, tg in zip(ta.ends, ta.tags):
                if tg == NOTCHED and v not in seen:
                    seen.add(v)
                    out.append([ta.label, v, NOTCHED])
        return out

    def to_json(self) -> dict:
        doc = self.base.to_json()
        doc["tags"] = self.tag_list()
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "TaggedTriangulation":
        base = Triangulation.from_json(doc)
        given = sorted(tuple(e) for e in doc.get("tags", []))
        for e in given:
            if len(e) != 3 or e[2] != NOTCHED:
                raise TaggedError(f"bad tag entry {list(e)!r}")
        plain_t = cls(base)
        expected_plain = {(e[0], e[1]) for e in plain_t.tag_list()}
        given_pairs = {(e[0], e[1]) for e in given}
        # A puncture is retagged exactly when its ends disagree with the untouched tagging.
        flipped = set()
        for ta in plain_t.tagged_arcs():
            for v in set(ta.ends):
                if v in base.topology.punctures and ((ta.label, v) in given_pairs) != ((ta.label, v) in expected_plain):
                    flipped.add(v)
        t = cls(base, frozenset(flipped))
        if sorted(tuple(e) for e in t.tag_list()) != given:
            raise TaggedError("tags are not a consistent tagging of the base triangulation")
        return t


def _swap(tag: str) -> str:
    return NOTCHED if tag == PLAIN else PLAIN


def tau(u: Triangulation) -> TaggedTriangulation:
    return TaggedTriangulation(check(u))


def delta_signature(t: TaggedTriangulation, y: int) -> int:
    if y not in t.punctures:
        raise TaggedError(f"vertex {y} is not a puncture")
    tags = [tg for ta in t.tagged_arcs() for v, tg in zip(ta.ends, ta.tags) if v == y]
    if all(tg == PLAIN for tg in tags):
        return 1
    if all(tg == NOTCHED for tg in tags):
        return -1
    return 0


def to_ordinary(t: TaggedTriangulation) -> Triangulation:
    """Untag at punctures with signature -1, then turn each doubled pair into a self-folded triangle."""
    arcs = t.tagged_arcs()
    deltas = {y: delta_signature(t, y) for y in t.punctures}
    by_under: dict[int, list[TaggedArc]] = {}
    for ta in arcs:
        by_under.setdefault(ta.underlying, []).append(ta)
    swap: dict[int, int] = {}
    for under, group in by_under.items():
        if len(group) == 1:
            continue
        if len(group) != 2:
            raise TaggedError(f"underlying arc {under} carries {len(group)} tagged arcs")
        first, second = group
        ys = [y for y in set(first.ends) if deltas.get(y) == 0 and first.tag_at(y) != second.tag_at(y)]
        if len(ys) != 1:
            raise TaggedError(f"doubled arc {under} does not meet a mixed puncture exactly once")
        y = ys[0]
        # after untagging, the plain end at y is the radius
        radius = first if first.tag_at(y) == "plain" else second
        loop = second if radius is first else first
        if radius.label != under:
            swap[radius.label] = loop.label
            swap[loop.label] = radius.label
    if not swap:
        return t.base
    mapping = {a: swap.get(a, a) for a in t.base.arcs}
    return check(relabel_arcs(t.base, mapping))


def retag(t: TaggedTriangulation, R: Iterable[int]) -> TaggedTriangulation:
    R = frozenset(R)
    stray = R - set(t.punctures)
    if stray:
        raise TaggedError(f"{sorted(stray)} are not punctures")
    sig = t.base.topology.sig
    if sig.p == 1 and not sig.h:
        return t
    return TaggedTriangulation(t.base, t.notched ^ R)


def exchange_quiver(t: TaggedTriangulation) -> Quiver:
    return _ordinary_quiver(to_ordinary(t))
