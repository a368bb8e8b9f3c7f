import json
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapes import (
    annulus22,
    octagon_maximal,
    pentagon_fan,
    punctured_triangle_selffolded,
    sphere4,
    square,
    torus,
)
from surfclust.builder import build_max_connected
from surfclust.explore import enumerate_triangulations
from surfclust.quiver import Quiver, canonical_form, mutate
from surfclust.surface import edge_bound, parse_sig, rank
from surfclust.surgery import once_punctured_digon, twice_punctured_monogon
from surfclust.triangulation import (
    ExcludedTriangulation,
    Kind,
    Triangulation,
    TriangulationError,
    canonical_key,
    check,
    edges_exclusion,
    exchange_quiver,
    flip,
    flippable_arcs,
    is_connected_max_2faces,
    is_maximal,
    plain,
    predicted_edges,
    relabel_arcs,
    selffolded,
    stats,
    surface_signature,
    triangle_kind,
    validate,
)

SWEEP = [
    "g=0,p=0,h=(6)",
    "g=0,p=0,h=(2,2)",
    "g=0,p=0,h=(3,1)",
    "g=1,p=1,h=()",
    "g=0,p=1,h=(4)",
    "g=0,p=2,h=(2)",
    "g=0,p=4,h=()",
    "g=0,p=1,h=(2)",
    "g=0,p=2,h=(1)",
]


@lru_cache(maxsize=None)
def members(sig_text: str):
    return tuple(enumerate_triangulations(parse_sig(sig_text), 5000))


def all_members():
    return [(s, t) for s in SWEEP for t in members(s)]


# -- oracles -------------------------------------------------------------------


def substitution_quiver(t: Triangulation) -> list[list[int]]:
    """Signed adjacency from the per-triangle rule, each radius standing in for its loop."""
    arcs = sorted(t.arcs)
    pos = {a: i for i, a in enumerate(arcs)}
    radius_of = {tr.loop: tr.radius for tr in t.triangles if tr.folded}
    stand_in = {r: l for l, r in radius_of.items()}
    per_arc = {}  # arc -> signed contributions to other arcs
    for tr in t.triangles:
        if tr.folded:
            continue
        s = [x[1] if x[0] == "a" else None for x in tr.sides]
        for i in range(3):
            u, v = s[i], s[(i + 1) % 3]
            if u is None or v is None:
                continue
            per_arc.setdefault(u, {}).setdefault(v, 0)
            per_arc[u][v] += 1
            per_arc.setdefault(v, {}).setdefault(u, 0)
            per_arc[v][u] -= 1
    n = len(arcs)
    b = [[0] * n for _ in range(n)]
    for i in arcs:
        for j in arcs:
            pi, pj = stand_in.get(i, i), stand_in.get(j, j)
            b[pos[i]][pos[j]] = per_arc.get(pi, {}).get(pj, 0) if pi != pj else 0
    return b


def catalan(k: int) -> int:
    c = [1]
    for m in range(1, k + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[k]


# -- examples ------------------------------------------------------------------


def test_square_validates():
    t = square()
    assert validate(t) == []
    assert surface_signature(t) == parse_sig("g=0,p=0,h=(4)")
    assert exchange_quiver(t).n == 1 and exchange_quiver(t).edge_count == 0
    assert not is_connected_max_2faces(t)


def test_slot_count_violation():
    t = Triangulation((plain("a0", "b0", "b1"), plain("a0", "b2", "a1"), plain("a0", "a1", "b3")))
    assert any("3 slots" in d for d in validate(t))
    with pytest.raises(TriangulationError):
        check(t)


def test_torus_validates():
    t = torus()
    assert validate(t) == []
    assert surface_signature(t) == parse_sig("g=1,p=1,h=()")
    assert t.topology.vertex_count == 1


def test_triangle_kinds():
    t = octagon_maximal()
    kinds = [triangle_kind(t, i) for i in range(len(t.triangles))]
    assert kinds.count(Kind.FACE) == 2 and kinds.count(Kind.CAP) == 4
    assert Kind.WEDGE in [triangle_kind(pentagon_fan(), i) for i in range(3)]
    sf = punctured_triangle_selffolded()
    assert Kind.SELF_FOLDED in [triangle_kind(sf, i) for i in range(3)]


def test_stats_examples():
    s = stats(octagon_maximal())
    assert (s.f, s.w, s.c, s.d_neg, s.s_f, s.s_w) == (2, 0, 4, 0, 0, 0)
    s = stats(punctured_triangle_selffolded())
    assert (s.f, s.w, s.c, s.s_w, s.s_f, s.d_neg) == (1, 1, 1, 1, 0, 0)
    s = stats(torus())
    assert (s.f, s.w, s.c, s.d_neg) == (2, 0, 0, 0)


def test_exchange_quiver_examples():
    q = exchange_quiver(torus())
    markov = Quiver.from_arrows(3, [(0, 1, 2), (1, 2, 2), (2, 0, 2)])
    assert canonical_form(q)[1] == canonical_form(markov)[1]
    assert q.edge_count == 6
    q = exchange_quiver(annulus22())
    assert q.n == 4 and q.edge_count == 6
    assert surface_signature(annulus22()) == parse_sig("g=0,p=0,h=(2,2)")


def test_predicted_edges_examples():
    assert predicted_edges(octagon_maximal()) == 6
    assert predicted_edges(punctured_triangle_selffolded()) == 2


def test_predicted_edges_twice_punctured_digon():
    found = 0
    for t in members("g=0,p=2,h=(2)"):
        s = stats(t)
        if (s.f, s.w, s.c, s.d_neg) == (2, 2, 0, 0) and not t.loops:
            assert predicted_edges(t) == 8 == exchange_quiver(t).edge_count
            found += 1
    assert found


def test_excluded_configurations():
    digon_sf = Triangulation((plain("b0", "b1", "a0"), selffolded(0, 1)))
    sphere_sf = next(t for t in members("g=0,p=4,h=()") if len(t.loops) == 3)
    for t in (digon_sf, twice_punctured_monogon(), sphere_sf):
        assert edges_exclusion(t) is not None
        with pytest.raises(ExcludedTriangulation):
            predicted_edges(t)
    # the sphere exception still attains the bound
    assert exchange_quiver(sphere_sf).edge_count == edge_bound(parse_sig("g=0,p=4,h=()"))


def test_maximality_examples():
    assert is_maximal(octagon_maximal())
    v = is_maximal(punctured_triangle_selffolded())
    assert not v and "self-folded" in v.reason
    assert members("g=0,p=1,h=(2)")
    assert not any(is_maximal(t) for t in members("g=0,p=1,h=(2)"))
    assert not is_maximal(once_punctured_digon())


def test_connected_max_two_faces_examples():
    assert is_connected_max_2faces(octagon_maximal())
    assert not is_connected_max_2faces(square())
    assert is_connected_max_2faces(torus())


def test_flip_pentagon():
    t = pentagon_fan()
    a = flippable_arcs(t)[0]
    u = flip(t, a)
    assert u != t
    assert flip(u, a) == t
    assert surface_signature(u) == surface_signature(t)


def test_flip_torus_stays_markov():
    t = torus()
    for a in flippable_arcs(t):
        u = flip(t, a)
        assert stats(u).f == 2
        assert canonical_form(exchange_quiver(u))[1] == canonical_form(exchange_quiver(t))[1]


def test_flip_radius_rejected():
    t = punctured_triangle_selffolded()
    with pytest.raises(TriangulationError):
        flip(t, 2)
    assert 2 not in flippable_arcs(t)


def test_json_round_trip_and_format():
    t = punctured_triangle_selffolded()
    doc = json.loads(t.dumps())
    assert doc["format"] == 1
    assert {"selffolded": {"loop": 1, "radius": 2}} in doc["triangles"]
    assert Triangulation.from_json(doc) == t
    with pytest.raises(TriangulationError):
        Triangulation.from_json({"format": 1, "triangles": [{"sides": ["a:0"]}]})


def test_relabel_arcs_keeps_everything():
    t = octagon_maximal()
    u = relabel_arcs(t, {a: 10 + a for a in t.arcs})
    assert u.arcs == frozenset(10 + a for a in t.arcs)
    assert canonical_key(u) == canonical_key(t)
    assert stats(u) == stats(t)


def test_builder_round_trip_signature():
    for text in ["g=2,p=3,h=(5)", "g=1,p=0,h=(2,1)", "g=0,p=2,h=(3)"]:
        sig = parse_sig(text)
        assert surface_signature(build_max_connected(sig)) == sig


@pytest.mark.parametrize("m", [4, 5, 6, 7, 8, 9])
def test_polygon_counts_match_catalan(m):
    assert len(enumerate_triangulations(parse_sig(f"g=0,p=0,h=({m})"), 10000)) == catalan(m - 2)


# -- identities over enumerations ----------------------------------------------


def test_substitution_rule_matches_exchange_quiver():
    for _, t in all_members():
        assert exchange_quiver(t).signed() == substitution_quiver(t)


def test_counting_identities():
    for text, t in all_members():
        sig = parse_sig(text)
        s = stats(t)
        n = len(t.arcs)
        assert n == rank(sig)
        assert 3 * s.f + 2 * s.w + s.c == 2 * n
        assert s.w + 2 * s.c == sig.marked_boundary
        e = exchange_quiver(t).edge_count
        assert e <= edge_bound(sig)
        if edges_exclusion(t) is None:
            assert predicted_edges(t) == e
            assert (e == edge_bound(sig)) == bool(is_maximal(t))


def test_flip_is_symmetric_and_compatible():
    for _, t in all_members():
        q = exchange_quiver(t)
        for a in flippable_arcs(t):
            u = flip(t, a)
            assert validate(u) == []
            assert exchange_quiver(u) == mutate(q, q.index(a))
            assert a in flippable_arcs(u)
            assert flip(u, a) == t


# -- random flip walks on larger surfaces --------------------------------------

WALK_SIGS = ["g=2,p=1,h=()", "g=1,p=2,h=(2)", "g=0,p=3,h=(3,1)", "g=1,p=0,h=(4)", "g=0,p=2,h=(2,2)"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(WALK_SIGS), st.lists(st.integers(0, 10**6), min_size=1, max_size=25))
def test_random_flip_walks(text, choices):
    sig = parse_sig(text)
    t = build_max_connected(sig)
    for c in choices:
        arcs = flippable_arcs(t)
        a = arcs[c % len(arcs)]
        q = exchange_quiver(t)
        t = flip(t, a)
        assert validate(t) == []
        assert surface_signature(t) == sig
        assert exchange_quiver(t) == mutate(q, q.index(a))
        s = stats(t)
        assert 3 * s.f + 2 * s.w + s.c == 2 * rank(sig)
        assert Triangulation.from_json(json.loads(t.dumps())) == t
        if edges_exclusion(t) is None:
            assert predicted_edges(t) == exchange_quiver(t).edge_count


def test_sphere_with_all_faces():
    t = sphere4()
    assert stats(t).f == 4
    assert exchange_quiver(t).edge_count == 12
