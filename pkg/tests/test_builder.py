import pytest

from surfclust.builder import (
    BuildError,
    ExceptionSurface,
    add_boundary_marked_point,
    add_boundary_punctured_component,
    add_puncture,
    base_library,
    base_triangulation,
    build_max_connected,
    execute,
    plan_build,
    seed_triangulation,
)
from surfclust.surface import (
    NO_CONNECTED_MAX_2FACES,
    SignatureError,
    SurfaceSig,
    cap_capacity,
    parse_sig,
    valid_signatures,
)
from surfclust.triangulation import (
    Kind,
    is_connected_max_2faces,
    is_maximal,
    stats,
    surface_signature,
    triangle_kind,
    validate,
)


def face_law(sig: SurfaceSig) -> int:
    return 4 * (sig.g - 1) + 2 * sig.b + 2 * sig.p + cap_capacity(sig)


def first_face(t):
    return next(i for i in range(len(t.triangles)) if triangle_kind(t, i) is Kind.FACE)


def component_with(t, size):
    return next(i for i, c in enumerate(t.topology.boundary_cycles) if len(c) == size)


def test_base_library_is_sound():
    lib = base_library(max_genus=4)
    listed = {(0, 0, (8,)), (0, 1, (5,)), (0, 2, (3,)), (0, 3, (1,)), (0, 5, ()),
              (0, 0, (4, 1)), (0, 0, (2, 2)), (0, 1, (1, 1)), (0, 0, (1, 1, 1))}
    assert listed <= {s.key for s in lib}
    for sig, t in lib.items():
        assert validate(t) == [], sig
        assert surface_signature(t) == sig
        assert is_connected_max_2faces(t), sig
        assert stats(t).f == face_law(sig)


def test_octagon_base():
    t = base_triangulation(parse_sig("g=0,p=0,h=(8)"))
    s = stats(t)
    assert (s.f, s.c) == (2, 4)
    assert is_connected_max_2faces(t)


def test_annulus_base_is_the_uniqueness_example():
    t = base_triangulation(parse_sig("g=0,p=0,h=(2,2)"))
    assert stats(t).f == 2 and stats(t).c == 2 and stats(t).d_pos == 1


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_genus_families(g):
    for sig in (SurfaceSig(g, 1, ()), SurfaceSig(g, 0, (1,))):
        t = base_triangulation(sig)
        assert surface_signature(t) == sig
        assert is_connected_max_2faces(t)
        assert stats(t).f == face_law(sig)


def test_add_puncture_to_octagon():
    t = base_triangulation(parse_sig("g=0,p=0,h=(8)"))
    u = add_puncture(t, first_face(t))
    assert surface_signature(u) == parse_sig("g=0,p=1,h=(8)")
    assert stats(u).f == 4
    assert is_connected_max_2faces(u)


def test_add_component_to_octagon():
    t = base_triangulation(parse_sig("g=0,p=0,h=(8)"))
    u = add_boundary_punctured_component(t, first_face(t))
    assert surface_signature(u) == parse_sig("g=0,p=0,h=(8,1)")
    s = stats(u)
    assert (s.f, s.w) == (4, 1)
    assert is_connected_max_2faces(u)


def test_marked_point_steps():
    t = base_triangulation(parse_sig("g=0,p=0,h=(2,2)"))
    before = stats(t)
    u = add_boundary_marked_point(t, component_with(t, 2))
    after = stats(u)
    assert surface_signature(u) == parse_sig("g=0,p=0,h=(3,2)")
    assert (after.f, after.w, after.c) == (before.f, before.w + 1, before.c)
    v = add_boundary_marked_point(u, component_with(u, 3))
    last = stats(v)
    assert surface_signature(v) == parse_sig("g=0,p=0,h=(4,2)")
    assert (last.f, last.w, last.c) == (after.f + 1, after.w - 1, after.c + 1)
    assert is_connected_max_2faces(u) and is_connected_max_2faces(v)


def test_moves_need_a_face():
    t = base_triangulation(parse_sig("g=0,p=0,h=(8)"))
    cap = next(i for i in range(len(t.triangles)) if triangle_kind(t, i) is Kind.CAP)
    with pytest.raises(BuildError):
        add_puncture(t, cap)
    with pytest.raises(BuildError):
        add_boundary_marked_point(t, 5)


def test_twice_punctured_triangle_is_a_base():
    plan = plan_build(parse_sig("g=0,p=2,h=(3)"))
    assert plan.steps == () and plan.base == parse_sig("g=0,p=2,h=(3)")


def test_once_punctured_digon_is_an_exception():
    with pytest.raises(ExceptionSurface) as err:
        build_max_connected(parse_sig("g=0,p=1,h=(2)"))
    assert err.value.item == 2


def test_invalid_signature_rejected():
    with pytest.raises(SignatureError):
        build_max_connected(parse_sig("g=0,p=3,h=()"))


def test_genus_two_with_boundary():
    sig = parse_sig("g=2,p=3,h=(5)")
    plan = plan_build(sig)
    ops = [s.op for s in plan.steps]
    assert ops == sorted(ops, key=["component", "puncture", "point"].index)
    t = execute(plan)
    assert surface_signature(t) == sig and is_connected_max_2faces(t)
    assert stats(t).f == face_law(sig)
    assert any(line.startswith("base ") for line in plan.log())


def test_totality_and_face_law():
    built = excepted = 0
    for sig in valid_signatures(12):
        if sig.key in NO_CONNECTED_MAX_2FACES:
            with pytest.raises(ExceptionSurface):
                build_max_connected(sig)
            excepted += 1
            continue
        t = build_max_connected(sig)
        assert surface_signature(t) == sig
        assert is_maximal(t) and is_connected_max_2faces(t)
        assert stats(t).f == face_law(sig) >= 2
        built += 1
    assert excepted == len(NO_CONNECTED_MAX_2FACES)
    assert built > 150


def test_seed_examples():
    t = seed_triangulation(parse_sig("g=0,p=0,h=(5)"))
    assert len(t.arcs) == 2 and len(t.triangles) == 3
    d = seed_triangulation(parse_sig("g=0,p=1,h=(2)"))
    assert len(d.arcs) == 2 and validate(d) == []
    sig = parse_sig("g=1,p=1,h=(2)")
    assert seed_triangulation(sig) == build_max_connected(sig)


def test_seeds_exist_everywhere():
    for sig in valid_signatures(12):
        t = seed_triangulation(sig)
        assert validate(t) == []
        assert surface_signature(t) == sig
