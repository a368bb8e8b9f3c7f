import pytest
from hypothesis import given
from hypothesis import strategies as st

from surfclust.surface import (
    BLOCK_ROUTE_EXCEPTIONS,
    BLOCK_UNIQUENESS_EXCEPTIONS,
    ISO_EXCEPTION_PAIRS,
    MATCH1_EXCEPTIONS,
    NO_CONNECTED_MAX_2FACES,
    NO_MAXIMAL,
    RECONSTRUCTION_EXCEPTIONS,
    Flag,
    SignatureError,
    SurfaceSig,
    cap_capacity,
    classify_exceptions,
    edge_bound,
    is_valid,
    parse_sig,
    rank,
    valid_signatures,
)


def S(g, p, *h):
    return SurfaceSig(g, p, h)


def test_validity_examples():
    assert not is_valid(S(0, 3))
    assert is_valid(S(0, 0, 4))
    assert is_valid(S(1, 1))


@pytest.mark.parametrize(
    "sig",
    [S(0, 0, 1), S(0, 0, 2), S(0, 0, 3), S(0, 1, 1), S(0, 0), S(0, 1), S(0, 2), S(0, 3), S(1, 0), S(2, 0)],
)
def test_small_cases_excluded(sig):
    assert not is_valid(sig)


def test_rank_examples():
    assert rank(S(0, 4)) == 6
    assert rank(S(1, 1)) == 3
    assert rank(S(0, 0, 8)) == 5


def test_rank_rejects_invalid():
    with pytest.raises(SignatureError):
        rank(S(0, 3))


def test_cap_capacity_examples():
    assert cap_capacity(S(0, 0, 2, 2)) == 2
    assert cap_capacity(S(0, 0, 8)) == 4
    assert cap_capacity(S(2, 1)) == 0


def test_edge_bound_examples():
    assert edge_bound(S(0, 0, 2, 2)) == 6
    assert edge_bound(S(0, 4)) == 12
    assert edge_bound(S(1, 1)) == 6


def test_classify_examples():
    assert classify_exceptions(S(0, 1, 2)).flags == {
        Flag.NO_MAXIMAL,
        Flag.NO_CONNECTED_MAX_2FACES,
        Flag.BLOCK_UNIQUENESS_EXCEPTION,
    }
    ann = classify_exceptions(S(0, 0, 2, 2))
    assert ann.flags == {Flag.ISO_EXCEPTION_PAIR, Flag.BLOCK_UNIQUENESS_EXCEPTION}
    assert ann.iso_partner == S(0, 2, 1)
    assert not classify_exceptions(S(2, 1))
    assert "NO_MAXIMAL" in classify_exceptions(S(0, 2, 1))


def test_tables_hold_the_listed_surfaces():
    assert NO_MAXIMAL == {S(0, 1, 2).key, S(0, 1, 3).key, S(0, 1, 4).key, S(0, 2, 1).key}
    by_item = {}
    for key, item in NO_CONNECTED_MAX_2FACES.items():
        by_item.setdefault(item, set()).add(key)
    assert by_item == {
        1: {S(0, 0, n).key for n in (4, 5, 6, 7)},
        2: {S(0, 1, n).key for n in (2, 3, 4)},
        3: {S(0, 2, 1).key, S(0, 2, 2).key},
        4: {S(0, 0, 1, 1).key, S(0, 0, 2, 1).key, S(0, 0, 3, 1).key},
    }
    assert ISO_EXCEPTION_PAIRS == {
        S(0, 0, 6).key: S(0, 1, 3).key,
        S(0, 1, 3).key: S(0, 0, 6).key,
        S(0, 2, 1).key: S(0, 0, 2, 2).key,
        S(0, 0, 2, 2).key: S(0, 2, 1).key,
    }
    assert BLOCK_ROUTE_EXCEPTIONS == {S(0, 4).key, S(0, 2, 2).key, S(0, 0, 2, 2).key}
    assert RECONSTRUCTION_EXCEPTIONS == {S(0, 4).key, S(0, 2, 1).key, S(0, 2, 2).key}
    assert BLOCK_ROUTE_EXCEPTIONS <= BLOCK_UNIQUENESS_EXCEPTIONS
    assert NO_MAXIMAL <= MATCH1_EXCEPTIONS
    for table in (NO_MAXIMAL, NO_CONNECTED_MAX_2FACES, BLOCK_UNIQUENESS_EXCEPTIONS, MATCH1_EXCEPTIONS):
        for key in table:
            assert is_valid(SurfaceSig(*key))


def test_signature_normalises_boundary_order():
    assert S(0, 1, 1, 3) == S(0, 1, 3, 1)
    assert S(0, 1, 1, 3).h == (3, 1)


def test_bad_signatures_rejected():
    with pytest.raises(SignatureError):
        S(-1, 0, 3)
    with pytest.raises(SignatureError):
        S(0, 0, 0)


def test_parse_round_trip_and_errors():
    for text in ["g=0,p=0,h=(4)", "g=1,p=1,h=()", "g=2,p=3,h=(5,2)"]:
        assert str(parse_sig(text)) == text
    assert parse_sig(" g = 0 , p = 2 , h = ( 1 , 3 ) ") == S(0, 2, 3, 1)
    for bad in ["g=0,p=0", "0,0,(4)", "g=a,p=0,h=()"]:
        with pytest.raises(SignatureError):
            parse_sig(bad)


def test_valid_signatures_enumeration():
    sigs = list(valid_signatures(12))
    assert len(sigs) == len(set(sigs))
    assert all(is_valid(s) and 1 <= rank(s) <= 12 for s in sigs)
    assert S(0, 6) in sigs and S(2, 1) in sigs and S(0, 0, 15) in sigs
    assert S(0, 0, 16) not in sigs


sigs = st.builds(
    SurfaceSig,
    st.integers(0, 3),
    st.integers(0, 5),
    st.lists(st.integers(1, 6), max_size=4).map(tuple),
).filter(is_valid)


@given(sigs)
def test_rank_steps(sig):
    r = rank(sig)
    assert rank(SurfaceSig(sig.g, sig.p + 1, sig.h)) == r + 3
    assert rank(SurfaceSig(sig.g, sig.p, sig.h + (1,))) == r + 4
    if sig.h:
        grown = (sig.h[0] + 1,) + sig.h[1:]
        assert rank(SurfaceSig(sig.g, sig.p, grown)) == r + 1


@given(sigs)
def test_classification_is_pure_lookup(sig):
    ex = classify_exceptions(sig)
    assert (Flag.NO_MAXIMAL in ex.flags) == (sig.key in NO_MAXIMAL)
    assert (ex.exist_item is not None) == (sig.key in NO_CONNECTED_MAX_2FACES)
    assert classify_exceptions(parse_sig(str(sig))) == ex
