from itertools import combinations

from hypothesis import assume, given, strategies as st

from radokit.backforth import build_iso, dump_table, load_table
from radokit.classifiers import cg_identities_check, changed_pairs
from radokit.constructions import build_finitary
from radokit.core import (Kind, adjacent, enumerate_pair, is_witness, least_base, pair, pair_index,
                          witness_direct)
from radokit.nat import LIMIT, bits, from_bits, parse, render, succ
from radokit.syntax import parse_view, render as render_spec
from radokit.views import (All, Base, Delete, Diff, Finite, FlipWithin, Inter, Nbhd, NonNbhdStrict, Restrict,
                           Switch, SymDiff, Union, WitnessSet, edge_count, eval_adjacent, simplify)
from radokit.witness import witness_least

from oracles import adj, changed, complemented, edges_in, perm_from_cycles, switched

small = st.integers(0, 63)
vertex_sets = st.frozensets(st.integers(0, 15), max_size=6)


@st.composite
def disjoint_pairs(draw, hi=24, size=5):
    sup = draw(st.lists(st.integers(0, hi), unique=True, max_size=size))
    k = draw(st.integers(0, len(sup)))
    return tuple(sup[:k]), tuple(sup[k:])


@given(st.integers(0, 2**200), st.integers(0, 2**200))
def test_adjacency_symmetric_and_matches_oracle(u, v):
    assert adjacent(u, v) == adjacent(v, u) == adj(u, v)
    assert not adjacent(u, u)


@given(disjoint_pairs())
def test_direct_witness_is_a_witness(uv):
    p = pair(*uv)
    z = witness_direct(p)
    assert is_witness(z, p)
    least = witness_least(Base(), p, z)
    assert least is not None and least <= z and is_witness(least, p)


@given(disjoint_pairs(), st.integers(0, 300))
def test_least_base_is_least(uv, lo):
    U, V = uv
    z = least_base(U, V, lo)
    assert z >= lo and z not in U and z not in V
    assert all(adj(z, u) for u in U) and not any(adj(z, v) for v in V)
    assert not any(all(adj(y, u) for u in U) and not any(adj(y, v) for v in V)
                   for y in range(lo, min(z, lo + 4096)) if y not in U and y not in V)


@given(st.integers(0, 5000), st.integers(0, 5))
def test_pair_enumeration_recurs(n, r):
    p = enumerate_pair(n)
    m = pair_index(p, r)
    assert enumerate_pair(m) == p and m >= pair_index(p, 0)


@given(vertex_sets, st.integers(0, 23), st.integers(0, 23))
def test_switch_involution(X, u, v):
    assume(u != v)
    view = Switch(Switch(Base(), Finite(tuple(sorted(X)))), Finite(tuple(sorted(X))))
    assert eval_adjacent(view, u, v) == adj(u, v)


@given(vertex_sets, vertex_sets, st.integers(0, 23), st.integers(0, 23))
def test_switch_composition(X, Y, u, v):
    assume(u != v)
    two = Switch(Switch(Base(), Finite(tuple(sorted(X)))), Finite(tuple(sorted(Y))))
    one = Switch(Base(), Finite(tuple(sorted(X ^ Y))))
    assert eval_adjacent(two, u, v) == eval_adjacent(one, u, v) == switched(X ^ Y)(u, v)
    s = simplify(two)
    assert eval_adjacent(s, u, v) == eval_adjacent(two, u, v)


@given(vertex_sets, st.lists(st.integers(0, 15), unique=True, min_size=3, max_size=3))
def test_switching_keeps_3_parity(X, S):
    assert edges_in(S) % 2 == edges_in(S, switched(X)) % 2
    assert edge_count(Switch(Base(), Finite(tuple(sorted(X)))), S) % 2 == edges_in(S) % 2


@given(st.lists(st.integers(0, 15), unique=True, min_size=4, max_size=5))
def test_complement_keeps_4_and_5_parity(S):
    n = len(S) * (len(S) - 1) // 2
    assert edges_in(S, complemented) == n - edges_in(S)
    assert edges_in(S) % 2 == edges_in(S, complemented) % 2
    assert edge_count(FlipWithin(Base(), All()), S) == edges_in(S, complemented)


@given(vertex_sets, st.lists(st.integers(0, 15), unique=True, min_size=5, max_size=5))
def test_5_parity_under_switch_then_complement(X, S):
    sw = switched(X)
    both = lambda a, b: a != b and not sw(a, b)  # noqa: E731
    assert edges_in(S) % 2 == edges_in(S, both) % 2


@given(st.lists(st.integers(0, 1100), unique=True, min_size=1, max_size=6))
def test_tower_render_roundtrip(ps):
    x = from_bits(ps)
    assert parse(render(x)) == x
    assert bits(x) == sorted(ps)
    assert (max(ps) >= LIMIT) == (type(x) is not int)
    y = succ(x)
    assert y > x and parse(render(y)) == y


@given(st.permutations(range(6)))
def test_changed_pairs_of_finitary_perms(perm):
    cycles, seen = [], set()
    for x in range(6):
        if x in seen:
            continue
        c, y = [x], perm[x]
        seen.add(x)
        while y != x:
            c.append(y)
            seen.add(y)
            y = perm[y]
        if len(c) > 1:
            cycles.append(tuple(c))
    g = build_finitary(cycles)
    assert set(changed_pairs(g, 16).pairs) == changed(perm_from_cycles(cycles), 16)


@given(st.permutations(range(4)), st.permutations(range(4)))
def test_cg_identities_random(p, q):
    def cyc(perm):
        out, seen = [], set()
        for x in range(len(perm)):
            if x in seen:
                continue
            c, y = [x], perm[x]
            seen.add(x)
            while y != x:
                c.append(y)
                seen.add(y)
                y = perm[y]
            if len(c) > 1:
                out.append(tuple(c))
        return out
    v = cg_identities_check(build_finitary(cyc(p)), build_finitary(cyc(q)), 10)
    assert v.kind is Kind.SETTLED


@given(st.frozensets(st.integers(0, 10), max_size=4), st.integers(8, 30))
def test_backforth_onto_finite_switch_is_partial_iso(X, steps):
    Xs = tuple(sorted(X))
    p = build_iso(Base(), Switch(Base(), Finite(Xs)), (), steps)
    assert p.error is None and not p.check()
    sw = switched(X)
    pairs = [(a, b) for a, b in p.pairs() if type(a) is int and type(b) is int]
    for (a, b), (c, d) in combinations(pairs, 2):
        assert adj(a, c) == sw(b, d)
    q = load_table(dump_table(p))
    assert q.pairs() == p.pairs()


def _sets():
    leaf = st.one_of(st.builds(lambda xs: Finite(tuple(sorted(xs))), st.frozensets(small, max_size=3)),
                     st.builds(Nbhd, small), st.builds(NonNbhdStrict, small), st.just(All()),
                     st.builds(lambda a, b: WitnessSet((a,), (b,)), st.integers(0, 5), st.integers(6, 9)))
    return st.recursive(leaf, lambda s: st.one_of(st.builds(Union, s, s), st.builds(Inter, s, s),
                                                  st.builds(Diff, s, s), st.builds(SymDiff, s, s)), max_leaves=4)


def _views():
    sets = _sets()
    base = st.just(Base())
    return st.recursive(base, lambda v: st.one_of(
        st.builds(Switch, v, sets), st.builds(FlipWithin, v, sets), st.builds(Restrict, v, sets),
        st.builds(lambda w, xs: Delete(w, tuple(sorted(xs))), v, st.frozensets(small, min_size=1, max_size=2))),
        max_leaves=3)


@given(_views())
def test_syntax_roundtrip_random(view):
    text = render_spec(view)
    assert parse_view(text) == view
    assert render_spec(parse_view(text)) == text


@given(_views(), st.integers(0, 31), st.integers(0, 31))
def test_simplify_preserves_adjacency(view, u, v):
    from radokit.views import in_universe
    assume(u != v and in_universe(view, u) and in_universe(view, v))
    assert eval_adjacent(simplify(view), u, v) == eval_adjacent(view, u, v)
