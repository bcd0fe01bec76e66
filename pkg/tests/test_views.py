from itertools import combinations

import pytest

from radokit.core import BadArity, OutOfUniverse, ParseError
from radokit.reports import parity_laws, switching_composition, switching_flips_4_parity
from radokit.syntax import parse_set, parse_view, render
from radokit.views import (All, Base, Delete, Diff, Finite, FlipWithin, Inter, Nbhd, NonNbhdStrict, Restrict,
                           Stream, SymDiff, Switch, Union, WitnessSet, edge_count, eval_adjacent, in_universe,
                           odd_parity, set_member, simplify, universe_in_window)

from oracles import adj, complemented, edges_in, switched


def test_set_member_examples():
    assert set_member(Nbhd(0), 3)
    assert not set_member(NonNbhdStrict(0), 0)
    assert set_member(WitnessSet((0,), (1,)), 5)


def test_set_algebra_against_python_sets():
    n0 = {x for x in range(64) if adj(x, 0)}
    n5 = {x for x in range(64) if adj(x, 5)}
    ncs2 = {x for x in range(64) if x != 2 and not adj(x, 2)}
    cases = [(Union(Nbhd(0), Nbhd(5)), n0 | n5), (Inter(Nbhd(0), Nbhd(5)), n0 & n5),
             (Diff(Nbhd(0), Nbhd(5)), n0 - n5), (SymDiff(Nbhd(0), Nbhd(5)), n0 ^ n5),
             (NonNbhdStrict(2), ncs2), (All(), set(range(64))), (Finite((3, 9)), {3, 9})]
    for spec, want in cases:
        assert {x for x in range(64) if set_member(spec, x)} == want


@pytest.mark.parametrize("view,u,v,want", [
    (Switch(Base(), Finite((0, 2))), 0, 1, False),
    (Switch(Base(), Finite((0, 2))), 0, 2, False),
])
def test_eval_adjacent_examples(view, u, v, want):
    assert eval_adjacent(view, u, v) is want


def test_flipwithin_all_is_complement():
    g = FlipWithin(Base(), All())
    for u in range(33):
        for v in range(u + 1, 33):
            assert eval_adjacent(g, u, v) == complemented(u, v)


def test_switch_matches_oracle():
    X = (1, 4, 6, 11)
    view = Switch(Base(), Finite(X))
    sw = switched(X)
    for u, v in combinations(range(24), 2):
        assert eval_adjacent(view, u, v) == sw(u, v)


def test_flipwithin_nonneighbours():
    view = FlipWithin(Base(), NonNbhdStrict(0))
    for u, v in combinations(range(32), 2):
        inside = all(x != 0 and not adj(x, 0) for x in (u, v))
        assert eval_adjacent(view, u, v) == (adj(u, v) != inside)


def test_delete_and_restrict_universe():
    d = Delete(Base(), (0, 3))
    assert not in_universe(d, 0) and in_universe(d, 1)
    with pytest.raises(OutOfUniverse):
        eval_adjacent(d, 0, 1)
    r = Restrict(Base(), Nbhd(0))
    assert universe_in_window(r, 8) == [1, 3, 5, 7]
    assert eval_adjacent(r, 1, 3) == adj(1, 3)


def test_switch_involution_pointwise():
    for X in [(), (0,), (1, 5, 9), tuple(range(0, 16, 3))]:
        view = Switch(Switch(Base(), Finite(X)), Finite(X))
        for u, v in combinations(range(32), 2):
            assert eval_adjacent(view, u, v) == adj(u, v)


def test_simplify_examples():
    X = Finite((2, 7))
    assert simplify(Switch(Switch(Base(), X), X)) == Base()
    assert simplify(Switch(Switch(Base(), Finite((0,))), Finite((1,)))) == Switch(Base(), Finite((0, 1)))
    assert simplify(Base()) == Base()


def test_simplify_is_pointwise_equivalent():
    v = Switch(Switch(Switch(Base(), Finite((0, 3))), Nbhd(2)), Finite((3, 5)))
    s = simplify(v)
    for a, b in combinations(range(16), 2):
        assert eval_adjacent(v, a, b) == eval_adjacent(s, a, b)


@pytest.mark.parametrize("S,want", [((0, 1, 2), False), ((0, 1, 3), True), ((0, 1, 2, 3), False)])
def test_odd_parity_examples(S, want):
    assert odd_parity(Base(), S) is want


def test_odd_parity_arity():
    with pytest.raises(BadArity):
        odd_parity(Base(), (0, 1))
    with pytest.raises(BadArity):
        odd_parity(Base(), range(6))


def test_edge_count_oracle():
    for S in combinations(range(9), 4):
        assert edge_count(Base(), S) == edges_in(S)


def test_parity_laws_hold():
    ok, detail = parity_laws(12)
    assert ok, detail
    assert detail["failures"] == {3: 0, 4: 0, 5: 0}


def test_switching_can_flip_4_parity():
    cert = switching_flips_4_parity()
    S, X = cert["set"], cert["X"]
    assert len(set(X) & set(S)) == 1
    assert edges_in(S) % 2 != edges_in(S, switched(X)) % 2


def test_switching_composition_law():
    ok, detail = switching_composition(100, 12, 24)
    assert ok, detail


@pytest.mark.parametrize("text", [
    "base", "switch(base,{0,2})", "flipwithin(base,NCS(0))", "delete(base,0,3)",
    "restrict(switch(base,N(1)+{4}),W({0},{1})-{7})", "switch(base,(N(0)&N(2))^{5})",
    "switch(base,stream:g5.C)", "flipwithin(base,all)",
])
def test_syntax_roundtrip(text):
    v = parse_view(text)
    assert parse_view(render(v)) == v
    assert render(parse_view(render(v))) == render(v)


def test_set_syntax_precedence():
    s = parse_set("N(0)-N(1)-{1}")
    assert render(parse_set(render(s))) == render(s)
    assert {x for x in range(32) if set_member(s, x)} == {x for x in range(32) if adj(x, 0) and not adj(x, 1)
                                                          and x != 1}


@pytest.mark.parametrize("bad", ["switch(base", "nope", "switch(base,{0,})", "flipwithin(base,N())", "base base"])
def test_syntax_errors(bad):
    with pytest.raises(ParseError):
        parse_view(bad)


def test_stream_spec_membership():
    from radokit.streams import Stream as StreamObj, register
    register(StreamObj("test.evens", lambda s: iter(range(0, 10**9, 2))), replace=True)
    assert set_member(Stream("test.evens"), 10) and not set_member(Stream("test.evens"), 7)
