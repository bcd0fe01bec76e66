from itertools import combinations

import pytest

from radokit.core import (FinitePairUV, Kind, adjacent, enumerate_pair, evidence_against, is_witness, least_base,
                          least_geq_int, pair, pair_code, pair_index, refuted, settled, supported, witness_direct)
from radokit.views import Base, Nbhd, Restrict, Finite, Switch
from radokit.witness import extension_evidence, search_witness, witness_least

from oracles import adj, pair_from_code, witness_scan


@pytest.mark.parametrize("u,v,want", [(0, 1, True), (0, 2, False), (2, 6, True), (5, 0, True)])
def test_adjacent_examples(u, v, want):
    assert adjacent(u, v) is want


def test_adjacent_matches_oracle_and_is_symmetric():
    for u in range(256):
        assert not adjacent(u, u)
        for v in range(u):
            assert adjacent(u, v) == adjacent(v, u) == adj(u, v)


def test_adjacent_large_ids():
    big = 2**63 - 1
    assert adjacent(big, 62) and not adjacent(2**63, 62) and adjacent(2**63, 63)


@pytest.mark.parametrize("U,V,want", [((0,), (1,), 5), ((), (), 1), ((1, 3), (0, 2), 26)])
def test_witness_direct_examples(U, V, want):
    assert witness_direct(pair(U, V)) == want


def test_witness_soundness_exhaustive_small():
    verts = range(11)
    count = 0
    for size in range(6):
        for sup in combinations(verts, size):
            # every split of the support into U and V, sampled by the low bits
            for mask in range(0, 1 << size, max(1, (1 << size) // 8)):
                U = tuple(x for i, x in enumerate(sup) if mask >> i & 1)
                V = tuple(x for i, x in enumerate(sup) if not mask >> i & 1)
                p = pair(U, V)
                z = witness_direct(p)
                assert is_witness(z, p)
                least = witness_least(Base(), p, 2**12)
                assert least is not None and least <= z and is_witness(least, p)
                assert least == witness_scan(U, V, 2**12)
                count += 1
    assert count > 1000


@pytest.mark.parametrize("U,V,want", [((0,), (1,), 5), ((), (), 0), ((1,), (0,), 2)])
def test_witness_least_examples(U, V, want):
    assert witness_least(Base(), pair(U, V), 64) == want


def test_witness_least_none_below_bound():
    # the least witness for ({0,1,2},{}) is 7
    assert witness_least(Base(), pair((0, 1, 2), ()), 6) is None
    assert witness_least(Base(), pair((0, 1, 2), ()), 7) == 7


def test_pair_rejects_overlap():
    with pytest.raises(ValueError):
        FinitePairUV((1, 2), (2,))


def test_pair_is_sorted_and_deduplicated():
    p = FinitePairUV((3, 1, 3), (0,))
    assert p.U == (1, 3) and p.V == (0,) and p.support == (0, 1, 3) and len(p) == 3


def test_enumerate_pair_codes():
    assert enumerate_pair(pair_index(pair(), 0)) == pair()
    assert enumerate_pair(pair_index(pair((0,), ()), 0)) == pair((0,), ())
    assert enumerate_pair(pair_index(pair((1,), (0,)), 0)) == pair((1,), (0,))
    assert pair_code(pair((1,), (0,))) == 5


def test_enumerate_pair_matches_base3_oracle():
    for n in range(3000):
        p = enumerate_pair(n)
        w = 0
        while (w + 1) * (w + 2) // 2 <= n:
            w += 1
        m = n - w * (w + 1) // 2
        U, V = pair_from_code(m)
        assert (p.U, p.V) == (U, V)


def test_enumerator_recurrence():
    # each pair over [0,3] appears at least 3 times among the first 10^6 indices
    hits: dict = {}
    for m in range(3**4):
        for r in range(3):
            n = pair_index(enumerate_pair(pair_index(FinitePairUV(*pair_from_code(m)))), r)
            assert n < 10**6
            hits[m] = hits.get(m, 0) + (enumerate_pair(n) == FinitePairUV(*pair_from_code(m)))
    assert min(hits.values()) == 3


def test_enumerate_pair_negative():
    with pytest.raises(ValueError):
        enumerate_pair(-1)


def test_least_geq_int_brute():
    for s in range(0, 200, 7):
        for ones in (0, 1, 0b101, 0b1000):
            for zeros in (0, 0b10, 0b10010):
                if ones & zeros:
                    continue
                want = next(z for z in range(s, 1 << 12) if z & ones == ones and not z & zeros)
                assert least_geq_int(s, ones, zeros) == want


def test_least_base_brute():
    cases = [((), (), 0), ((0,), (1,), 0), ((3,), (0, 1), 10), ((2, 5), (4,), 40), ((7,), (), 100)]
    for U, V, lo in cases:
        want = next(z for z in range(lo, 1 << 14) if z not in U and z not in V
                    and all(adj(z, u) for u in U) and not any(adj(z, v) for v in V))
        assert least_base(U, V, lo) == want


def test_least_base_exclude():
    assert least_base((0,), (), 0, frozenset({1, 3})) == 5


def test_extension_evidence_base():
    v = extension_evidence(Base(), 16, 3)
    assert v.kind is Kind.SUPPORTED and v.window == 16 and v.depth == 3
    assert v.stats["above_direct"] == 0


def test_extension_evidence_two_vertex_graph():
    v = extension_evidence(Restrict(Base(), Finite((0, 1))), 16, 1)
    assert v.refuted
    p = v.certificate
    # the certificate names a pair inside the two-vertex universe with no witness there
    assert set(p.support) <= {0, 1}
    assert witness_scan(p.U, p.V, 64, universe={0, 1}) is None


def test_extension_evidence_switch_at_neighbourhood():
    v = extension_evidence(Switch(Base(), Nbhd(0)), 8, 1)
    assert v.refuted and v.certificate == pair((0,), ())


def test_extension_evidence_bad_depth():
    with pytest.raises(ValueError):
        extension_evidence(Base(), 8, 0)


def test_search_witness_exact_for_stream_free_views():
    res = search_witness(Switch(Base(), Nbhd(0)), (0,), ())
    assert res.witness is None and res.exact


def test_verdict_constructors():
    assert refuted({"x": 1}).refuted
    with pytest.raises(ValueError):
        refuted(None)
    s = supported(8, 2)
    assert s.positive and not s.negative
    a = evidence_against(8)
    assert a.negative and not a.positive and a.kind is Kind.SUPPORTED
    e = settled("finitary")
    assert e.positive and e.rule == "finitary"


def test_verdict_json_roundtrip():
    from radokit.core import Verdict
    v = evidence_against(16, 2, note="growth", growth=[1, 2, 3])
    assert Verdict.from_json(v.to_json()) == v
