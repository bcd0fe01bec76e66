import pytest

from radokit.backforth import (PermTable, back, build_iso, dump_table, extend, forth, load_table, read_table,
                               write_table)
from radokit.core import NoWitnessWithinBound, OutOfUniverse, ParseError, PreconditionViolated, SeedInconsistent
from radokit.views import All, Base, Delete, Finite, FlipWithin, Nbhd, NonNbhdStrict, Restrict, Switch, eval_adjacent

from oracles import adj, complemented, is_partial_iso, switched


def empty(source, target, seed=()):
    return build_iso(source, target, seed, 0)


def test_forth_examples():
    p = forth(empty(Base(), Base()), 0)
    assert p.pairs() == [(0, 0)]
    p = forth(empty(Base(), Switch(Base(), Finite((0,))), [(0, 0)]), 1)
    assert p.pairs() == [(0, 0), (1, 2)]
    p = forth(empty(Base(), FlipWithin(Base(), All()), [(0, 0)]), 1)
    assert p.pairs() == [(0, 0), (1, 2)]


def test_back_examples():
    p = back(empty(Base(), Base(), [(0, 0)]), 1)
    assert p.pairs() == [(0, 0), (1, 1)]
    p = back(empty(Base(), Base()), 0)
    assert p.pairs() == [(0, 0)]
    # toward the switched graph: the least source vertex consistent with both seeds
    p = back(empty(Base(), Switch(Base(), Finite((0,))), [(0, 0), (1, 2)]), 1)
    assert p.pairs() == [(0, 0), (1, 2), (2, 1)]
    assert is_partial_iso(p.pairs(), adj, switched({0}))


def test_forth_rejects_mapped_and_foreign_vertices():
    p = empty(Delete(Base(), (0,)), Base())
    with pytest.raises(OutOfUniverse):
        forth(p, 0)
    p = empty(Base(), Base(), [(0, 0)])
    with pytest.raises(PreconditionViolated):
        forth(p, 0)


def test_identity_on_twenty():
    p = build_iso(Base(), Base(), (), 20, 2**20)
    assert p.pairs() == [(i, i) for i in range(20)]


def test_switch_example_alternates():
    p = build_iso(Base(), Switch(Base(), Finite((0,))), [(0, 0)], 2, 2**20)
    # forth maps 1 to 2, then back finds the preimage of the least unhit target 1
    assert p.pairs() == [(0, 0), (1, 2), (2, 1)]
    assert p.depth == 2


def test_seed_errors():
    with pytest.raises(OutOfUniverse):
        build_iso(Base(), Delete(Base(), (0,)), [(0, 0)], 2)
    with pytest.raises(SeedInconsistent):
        build_iso(Base(), Base(), [(0, 0), (1, 2)], 2)
    with pytest.raises(SeedInconsistent):
        build_iso(Base(), Base(), [(0, 1), (2, 1)], 2)


@pytest.mark.parametrize("target,oracle", [
    (Base(), adj),
    (Switch(Base(), Finite((0, 3))), switched({0, 3})),
    (FlipWithin(Base(), All()), complemented),
])
def test_partial_iso_invariant(target, oracle):
    p = build_iso(Base(), target, (), 48)
    assert not p.check()
    # the plain-int oracle only sees images below 2^1024
    small = [(a, b) for a, b in p.pairs() if type(a) is int and type(b) is int]
    assert len(small) >= 8
    assert is_partial_iso(small, adj, oracle)


def test_partial_iso_invariant_symbolic_targets():
    for target in (Restrict(Base(), Nbhd(0)), FlipWithin(Base(), NonNbhdStrict(0)), Delete(Base(), (0,))):
        p = build_iso(Base(), target, (), 40)
        assert not p.check() and p.error is None


def test_switch_at_neighbourhood_isolates_vertex():
    # switching at N(0) leaves 0 isolated, so no image exists for a neighbour of 0
    p = build_iso(Base(), Switch(Base(), Nbhd(0)), (), 40)
    assert p.error is not None and not p.check()


def test_progress():
    k = 12
    p = build_iso(Base(), Switch(Base(), Finite((1,))), (), 2 * k)
    assert all(i in p.fwd for i in range(k))
    assert all(i in p.inv for i in range(k))


def test_determinism_and_prefixes():
    a = build_iso(Base(), FlipWithin(Base(), All()), (), 30)
    b = build_iso(Base(), FlipWithin(Base(), All()), (), 30)
    assert dump_table(a) == dump_table(b)
    c = build_iso(Base(), FlipWithin(Base(), All()), (), 50)
    assert set(a.pairs()) <= set(c.pairs())
    extend(a, 20)
    assert a.pairs() == c.pairs()


def test_bounded_search_marks_partial_table():
    # a two-vertex universe has no image for a third vertex
    p = build_iso(Base(), Restrict(Base(), Finite((0, 1))), (), 6)
    assert p.error is not None and len(p) == 2
    with pytest.raises(NoWitnessWithinBound):
        forth(p, 5)


def test_table_roundtrip(tmp_path):
    p = build_iso(Base(), Switch(Base(), Nbhd(2)), [(2, 2)], 40, None, {"id": "demo", "v": 2})
    path = tmp_path / "t.tsv"
    write_table(p, path)
    text = path.read_text()
    q = read_table(path)
    assert dump_table(q) == text
    assert q.pairs() == p.pairs() and q.provenance == p.provenance and q.target == p.target


def test_lazy_tables_materialize_on_dump():
    fwd = {0: 1, 1: 0}
    p = PermTable(Base(), Base(), {}, {}, {"id": "swap", "method": "finitary", "support": [0, 1]}, 0, None,
                  lambda v: fwd.get(v, v), lambda w: fwd.get(w, w))
    text = dump_table(p, 4)
    assert text.splitlines()[-4:] == ["0\t1", "1\t0", "2\t2", "3\t3"]
    q = load_table(text)
    assert q(100) == 100 and q(0) == 1


def test_tower_values_roundtrip():
    from radokit.nat import from_bits, pow2
    t = from_bits([pow2(pow2(1100)), 3])
    p = PermTable(Base(), Base(), {0: t, 1: 1}, {t: 0, 1: 1}, {"id": "big"}, 2)
    q = load_table(dump_table(p))
    assert q(0) is t


@pytest.mark.parametrize("text,line", [
    ("# provenance: id=x\n# source: base\n# target: base\n# depth: 0\n0 1\n", 5),
    ("# provenance: id=x\n# source: base\n# target: base\n# depth: 0\n1\t1\n0\t0\n", 6),
    ("# provenance: id=x\n# source: base\n# target: base\n# depth: 0\n0\t1\n1\t1\n", 6),
    ("# provenance: id=x\n# source: base\n# target: base\n# depth: 0\n0\tx\n", 5),
    ("# provenance: id=x\n# source: base\n# target: base\n# depth: 0\n0\t0\n# late: 1\n", 6),
])
def test_malformed_tables_report_line(text, line):
    with pytest.raises(ParseError) as e:
        load_table(text)
    assert e.value.line == line and f"line {line}" in str(e.value)


def test_missing_header():
    with pytest.raises(ParseError):
        load_table("# source: base\n0\t0\n")


def test_inverted_orientation():
    p = build_iso(Base(), Switch(Base(), Finite((0,))), [(0, 0)], 10)
    q = p.inverted()
    assert q.source == p.target and q.provenance["orientation"] == "inverse"
    for a, b in p.pairs():
        assert q(b) == a
    assert all(eval_adjacent(q.source, x, y) == eval_adjacent(q.target, q(x), q(y))
               for x in q.fwd for y in q.fwd if x != y)
