"""Surface signatures ``(g, p, h)`` and the classification tables."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

__all__ = [
    "SurfaceSig",
    "SignatureError",
    "Flag",
    "Exceptions",
    "is_valid",
    "rank",
    "cap_capacity",
    "edge_bound",
    "classify_exceptions",
    "parse_sig",
    "valid_signatures",
    "NO_MAXIMAL",
    "NO_CONNECTED_MAX_2FACES",
    "ISO_EXCEPTION_PAIRS",
    "BLOCK_UNIQUENESS_EXCEPTIONS",
    "RECONSTRUCTION_EXCEPTIONS",
    "EDGES_FORMULA_SURFACES",
    "BLOCK_ROUTE_EXCEPTIONS",
    "MATCH1_EXCEPTIONS",
]


class SignatureError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SurfaceSig:
    """Genus, puncture count and marked points per boundary component.

    ``h`` is normalised to a descending tuple, so equality is equality of
    homeomorphism types.
    """

    g: int
    p: int = 0
    h: tuple[int, ...] = field(default=())

    def __post_init__(self):
        h = tuple(sorted((int(x) for x in self.h), reverse=True))
        object.__setattr__(self, "h", h)
        if self.g < 0 or self.p < 0:
            raise SignatureError(f"negative genus or puncture count in {self}")
        if any(x < 1 for x in h):
            raise SignatureError("every boundary component needs a marked point")

    @property
    def b(self) -> int:
        return len(self.h)

    @property
    def marked_boundary(self) -> int:
        return sum(self.h)

    @property
    def key(self) -> tuple:
        return (self.g, self.p, self.h)

    def __str__(self):
        return f"g={self.g},p={self.p},h=({','.join(map(str, self.h))})"

    def describe(self) -> str:
        """Human-friendly name such as ``twice-punctured digon``."""
        return _describe(self)


_SIG_RE = re.compile(r"^\s*g\s*=\s*(\d+)\s*,\s*p\s*=\s*(\d+)\s*,\s*h\s*=\s*\(([\d,\s]*)\)\s*$")


def parse_sig(text: str) -> SurfaceSig:
    """Parse ``g=G,p=P,h=(h1,...,hb)``."""
    m = _SIG_RE.match(text)
    if not m:
        raise SignatureError(f"cannot parse signature {text!r}; expected g=G,p=P,h=(h1,...)")
    hs = [int(x) for x in m.group(3).replace(" ", "").split(",") if x]
    return SurfaceSig(int(m.group(1)), int(m.group(2)), tuple(hs))


def is_valid(sig: SurfaceSig) -> bool:
    g, p, h = sig.g, sig.p, sig.h
    if not h and p == 0:
        return False  # no marked points at all
    if g == 0 and not h:
        return p >= 4
    if g == 0 and len(h) == 1:
        if p == 0 and h[0] <= 3:
            return False
        if p == 1 and h[0] == 1:
            return False
    return True


def _require_valid(sig: SurfaceSig) -> None:
    if not is_valid(sig):
        raise SignatureError(f"{sig} is not an admissible surface")


def rank(sig: SurfaceSig) -> int:
    _require_valid(sig)
    return 6 * (sig.g - 1) + 3 * sig.b + 3 * sig.p + sig.marked_boundary


def cap_capacity(sig: SurfaceSig) -> int:
    return sum(x // 2 for x in sig.h)


def edge_bound(sig: SurfaceSig) -> int:
    return 2 * rank(sig) - sig.marked_boundary + cap_capacity(sig)


# -- classification tables -----------------------------------------------------


def _k(g: int, p: int, *h: int) -> tuple:
    return SurfaceSig(g, p, h).key


# Surfaces with no maximal triangulation at all.
NO_MAXIMAL = frozenset({_k(0, 1, 2), _k(0, 1, 3), _k(0, 1, 4), _k(0, 2, 1)})

# Surfaces without a connected maximal triangulation having two or more faces,
# grouped by the existence-list item that names them.
NO_CONNECTED_MAX_2FACES = {
    _k(0, 0, 4): 1, _k(0, 0, 5): 1, _k(0, 0, 6): 1, _k(0, 0, 7): 1,
    _k(0, 1, 2): 2, _k(0, 1, 3): 2, _k(0, 1, 4): 2,
    _k(0, 2, 1): 3, _k(0, 2, 2): 3,
    _k(0, 0, 1, 1): 4, _k(0, 0, 2, 1): 4, _k(0, 0, 3, 1): 4,
}

NO_CONNECTED_MAX_2FACES_ITEMS = {
    1: "unpunctured 4-, 5-, 6- and 7-gons",
    2: "once-punctured 2-, 3- and 4-gons",
    3: "twice-punctured 1- and 2-gons",
    4: "annuli with (1,1), (2,1) and (3,1) marked points",
}

# Pairs of distinct surfaces sharing an exchange-quiver mutation class.
ISO_EXCEPTION_PAIRS = {
    _k(0, 0, 6): _k(0, 1, 3), _k(0, 1, 3): _k(0, 0, 6),
    _k(0, 2, 1): _k(0, 0, 2, 2), _k(0, 0, 2, 2): _k(0, 2, 1),
}

# Surfaces whose connected maximal quivers may have several block decompositions.
BLOCK_UNIQUENESS_EXCEPTIONS = frozenset({
    _k(0, 4), _k(0, 2, 2), _k(0, 1, 2), _k(0, 1, 3), _k(0, 1, 4), _k(0, 0, 2, 2), _k(0, 0, 6),
})

# Surfaces excluded from quiver-to-homeomorphism transport.
RECONSTRUCTION_EXCEPTIONS = frozenset({_k(0, 4), _k(0, 2, 1), _k(0, 2, 2)})

# Surfaces excluded from uniqueness of the {I, II} decomposition of maximal connected quivers.
BLOCK_ROUTE_EXCEPTIONS = frozenset({_k(0, 4), _k(0, 2, 2), _k(0, 0, 2, 2)})

# Surfaces where an isomorphic quiver need not come from a maximal triangulation.
MATCH1_EXCEPTIONS = frozenset({_k(0, 4), _k(0, 2, 1), _k(0, 1, 2), _k(0, 1, 3), _k(0, 1, 4)})

# Surfaces carrying the three triangulations excluded from the edge-count formula.
EDGES_FORMULA_SURFACES = frozenset({_k(0, 1, 2), _k(0, 2, 1), _k(0, 4)})


class Flag(str, Enum):
    NO_MAXIMAL = "NO_MAXIMAL"
    NO_CONNECTED_MAX_2FACES = "NO_CONNECTED_MAX_2FACES"
    ISO_EXCEPTION_PAIR = "ISO_EXCEPTION_PAIR"
    BLOCK_UNIQUENESS_EXCEPTION = "BLOCK_UNIQUENESS_EXCEPTION"
    RECONSTRUCTION_EXCEPTION = "RECONSTRUCTION_EXCEPTION"


@dataclass(frozen=True)
class Exceptions:
    flags: frozenset = frozenset()
    iso_partner: SurfaceSig | None = None
    exist_item: int | None = None

    def __contains__(self, flag) -> bool:
        return Flag(flag) in self.flags

    def __bool__(self):
        return bool(self.flags)

    def names(self) -> list[str]:
        return sorted(f.value for f in self.flags)


def classify_exceptions(sig: SurfaceSig) -> Exceptions:
    """Table lookup; never computes anything about the surface itself."""
    _require_valid(sig)
    key = sig.key
    flags = set()
    if key in NO_MAXIMAL:
        flags.add(Flag.NO_MAXIMAL)
    if key in NO_CONNECTED_MAX_2FACES:
        flags.add(Flag.NO_CONNECTED_MAX_2FACES)
    partner = None
    if key in ISO_EXCEPTION_PAIRS:
        flags.add(Flag.ISO_EXCEPTION_PAIR)
        g, p, h = ISO_EXCEPTION_PAIRS[key]
        partner = SurfaceSig(g, p, h)
    if key in BLOCK_UNIQUENESS_EXCEPTIONS:
        flags.add(Flag.BLOCK_UNIQUENESS_EXCEPTION)
    if key in RECONSTRUCTION_EXCEPTIONS:
        flags.add(Flag.RECONSTRUCTION_EXCEPTION)
    return Exceptions(frozenset(flags), partner, NO_CONNECTED_MAX_2FACES.get(key))


def valid_signatures(max_rank: int) -> Iterator[SurfaceSig]:
    """Every admissible signature of rank at most ``max_rank``, in a fixed order."""
    for g in range(max_rank // 6 + 2):
        for b in range(max_rank + 1):
            for p in range(max_rank // 3 + 3):
                base = 6 * (g - 1) + 3 * b + 3 * p
                slack = max_rank - base
                if b == 0:
                    sig = SurfaceSig(g, p, ())
                    if slack >= 0 and is_valid(sig) and rank(sig) >= 1:
                        yield sig
                    continue
                if slack < b:
                    continue
                for h in _partitions_desc(b, slack):
                    sig = SurfaceSig(g, p, h)
                    if is_valid(sig) and rank(sig) >= 1:
                        yield sig


def _partitions_desc(parts: int, limit: int, top: int | None = None) -> Iterable[tuple[int, ...]]:
    """Descending tuples of ``parts`` positive integers with sum at most ``limit``."""
    if parts == 0:
        yield ()
        return
    top = limit if top is None else top
    for first in range(min(top, limit - (parts - 1)), 0, -1):
        for rest in _partitions_desc(parts - 1, limit - first, first):
            yield (first,) + rest


_COUNT_WORDS = {1: "once", 2: "twice", 3: "thrice"}


def _describe(sig: SurfaceSig) -> str:
    punct = ""
    if sig.p:
        punct = f"{_COUNT_WORDS.get(sig.p, f'{sig.p}-times')}-punctured "
    if sig.g == 0 and sig.b == 1:
        names = {1: "monogon", 2: "digon", 3: "triangle", 4: "square", 5: "pentagon", 6: "hexagon", 8: "octagon"}
        shape = names.get(sig.h[0], f"{sig.h[0]}-gon")
        return (punct or "unpunctured ") + shape
    if sig.g == 0 and sig.b == 0:
        return f"{sig.p}-punctured sphere"
    if sig.g == 0 and sig.b == 2:
        return f"{punct}annulus {sig.h}"
    shape = "torus" if sig.g == 1 else f"genus-{sig.g} surface"
    if sig.b:
        return f"{punct}{shape} with boundary {sig.h}"
    return punct + shape
