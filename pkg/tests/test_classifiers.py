from itertools import combinations, permutations

import pytest

from radokit.backforth import build_iso
from radokit.classifiers import (GROUPS, RULES, changed_pairs, changes_at, cg_identities_check, classify, compose,
                                 copy_evidence, faut_evidence, filter_member, identity_table, isolated_vertex_cert,
                                 parity_preservation, recheck_isolated, recheck_parity_certificate)
from radokit.constructions import build_finitary
from radokit.core import BadArity, EmptyEdgeFamily, Kind, PreconditionViolated
from radokit.reports import cg_exhaustive
from radokit.views import All, Base, Finite, FlipWithin, Inter, Nbhd, NonNbhdStrict, Switch, Union, WitnessSet

from oracles import adj, changed, edges_in, perm_from_cycles


def test_identity_is_positive_everywhere():
    r = classify(identity_table())
    assert set(r.verdicts) == set(GROUPS)
    assert all(v.positive for v in r.verdicts.values())
    assert all(v.rule is None or v.rule in RULES for v in r.verdicts.values())


def test_transposition_changed_pairs_match_oracle():
    g = build_finitary([(0, 1)])
    for w in (8, 16, 33):
        assert set(changed_pairs(g, w).pairs) == changed(perm_from_cycles([(0, 1)]), w)
    # vertex 0 changes adjacency exactly where bit 0 and bit 1 of w differ
    assert changes_at(g, 0, 8) == [2, 5, 6]
    assert set(changed_pairs(g, 8).pairs) == {(0, 2), (0, 5), (0, 6), (1, 2), (1, 5), (1, 6)}
    assert changed_pairs(g, 16).recheck(g)


@pytest.mark.parametrize("cycles", [[(0, 1)], [(0, 2, 5)], [(1, 3), (4, 7)], [(0, 1, 2, 3)]])
def test_changed_pairs_random_finitary(cycles):
    g = build_finitary(cycles)
    assert set(changed_pairs(g, 20).pairs) == changed(perm_from_cycles(cycles), 20)


def test_finitary_transposition_membership():
    r = classify(build_finitary([(0, 1)]))
    v = r.verdicts
    for grp in ("Aut", "Aut1", "Aut2", "AutH", "S", "D", "B"):
        assert v[grp].refuted, grp
    for grp in ("Aut3", "AutFilter", "FAutH", "AutStarH"):
        assert v[grp].positive and v[grp].kind is Kind.SETTLED, grp


def test_parity_certificates_recheck():
    g = build_finitary([(0, 1)])
    for k in (3, 4, 5):
        v = parity_preservation(g, 12, k)
        assert v.refuted and recheck_parity_certificate(g, v.certificate)
        S = v.certificate["set"]
        img = perm_from_cycles([(0, 1)])
        assert edges_in(S) % 2 != edges_in([img(x) for x in S]) % 2
    with pytest.raises(BadArity):
        parity_preservation(g, 12, 6)


def test_complement_preserves_4_and_5_parity():
    g = build_iso(Base(), FlipWithin(Base(), All()), (), 48)
    w = min(12, g.domain_prefix())
    assert parity_preservation(g, w, 4).positive
    assert parity_preservation(g, w, 5).positive
    v = parity_preservation(g, w, 3)
    assert v.refuted and recheck_parity_certificate(g, v.certificate)


def test_cg_identities_on_small_supports():
    ok, detail = cg_exhaustive(5, 2000, 12)
    assert ok, detail
    assert detail["permutations"] == 120 and detail["checked"] <= 2000


def test_cg_identities_on_lazy_and_table_perms():
    g = build_finitary([(0, 3)])
    h = build_iso(Base(), Switch(Base(), Finite((2,))), [(0, 0)], 40)
    v = cg_identities_check(g, h, 12)
    assert v.kind is Kind.SETTLED and v.rule == "cg-identities"


def test_compose_is_right_action():
    g = build_finitary([(0, 1)])
    h = build_finitary([(1, 2)])
    gh = compose(g, h)
    assert [gh(x) for x in range(4)] == [2, 0, 1, 3]


def test_filter_member_examples():
    v = filter_member(Nbhd(3), 32, 3)
    assert v.kind is Kind.SETTLED and v.certificate["T"] == [3]
    v = filter_member(Inter(Nbhd(1), Nbhd(2)), 32, 3)
    assert v.kind is Kind.SETTLED and v.certificate["T"] == [1, 2]
    assert filter_member(Union(Nbhd(0), Nbhd(1)), 32, 3).positive
    assert filter_member(Finite((1, 2)), 32, 3).refuted
    # the strict non-neighbourhood misses every neighbourhood-generated set
    assert filter_member(NonNbhdStrict(0), 32, 3).refuted


def test_filter_member_refutation_certificate_is_sound():
    # any finite intersection of neighbourhoods also meets N(1)
    v = filter_member(WitnessSet((0,), (1,)), 32, 2)
    assert v.refuted
    wit = v.certificate["outside_common_neighbour"]
    assert set(wit) == {"", "0", "1", "0,1"}
    for key, z in wit.items():
        T = [int(t) for t in key.split(",") if t]
        assert all(adj(z, t) for t in T)
        assert not (adj(z, 0) and not adj(z, 1) and z not in (0, 1))


def test_filter_member_window_evidence_for_streams():
    from radokit.streams import Stream as StreamObj, register
    from radokit.views import Stream
    register(StreamObj("test.n0", lambda s: (z for z in range(1, 10 ** 9) if adj(z, 0))), replace=True)
    v = filter_member(Stream("test.n0"), 32, 2)
    assert v.kind is Kind.SUPPORTED and v.positive
    T = v.certificate["T"]
    common = {z for z in range(32) if all(adj(z, t) for t in T) and z not in T}
    assert common and all(adj(z, 0) for z in common)


def test_copy_evidence_examples():
    assert copy_evidence(Base(), Nbhd(0), 32, 2).positive
    v = copy_evidence(Base(), Finite((0, 1, 2)), 32, 1)
    assert v.refuted
    p = v.certificate
    assert all(not (all(adj(z, u) for u in p.U) and not any(adj(z, x) for x in p.V))
               for z in (0, 1, 2) if z not in p.support)
    with pytest.raises(ValueError):
        copy_evidence(Base(), Nbhd(0), 32, 0)


def test_isolated_vertex_cert():
    v = isolated_vertex_cert(Base(), Finite((0, 2, 4)), 0, 64)
    assert v.kind is Kind.SETTLED
    assert not any(adj(0, y) for y in (2, 4))
    v = isolated_vertex_cert(Base(), Union(Nbhd(0), Finite((0,))), 0, 64)
    assert v.refuted and recheck_isolated(Base(), Union(Nbhd(0), Finite((0,))), v.certificate)
    with pytest.raises(PreconditionViolated):
        isolated_vertex_cert(Base(), Finite((2,)), 0, 64)


def test_faut_evidence_needs_edges():
    with pytest.raises(EmptyEdgeFamily):
        faut_evidence(build_finitary([(0, 1)]), [], 16, 1, 4)


def test_faut_evidence_finitary_uses_support():
    v, S = faut_evidence(build_finitary([(0, 1)]), [Nbhd(2)], 32, 1, 4)
    assert v.positive and S == [0, 1]


def test_refutations_are_monotone_in_window():
    g = build_finitary([(0, 5)])
    small = parity_preservation(g, 8, 3)
    assert small.refuted
    for w in (10, 12, 16):
        assert parity_preservation(g, w, 3).refuted


def test_supported_verdicts_record_window():
    g = identity_table()
    for w in (8, 16):
        v = parity_preservation(g, w, 4)
        assert v.kind is Kind.SUPPORTED and v.window == w


def test_every_permutation_of_four_points_has_consistent_reducts():
    # a finitary permutation lies in S, D or B only if it is an automorphism on the window
    for perm in permutations(range(4)):
        cycles = []
        seen = set()
        for x in range(4):
            if x in seen:
                continue
            c = [x]
            seen.add(x)
            y = perm[x]
            while y != x:
                c.append(y)
                seen.add(y)
                y = perm[y]
            if len(c) > 1:
                cycles.append(tuple(c))
        g = build_finitary(cycles)
        moved = bool(cycles)
        for k in (3, 4, 5):
            v = parity_preservation(g, 12, k)
            assert v.refuted == moved
            if v.refuted:
                assert recheck_parity_certificate(g, v.certificate)


def test_changed_pairs_window_is_within_materialized_part():
    h = build_iso(Base(), Switch(Base(), Finite((0,))), [(0, 0)], 10)
    with pytest.raises(PreconditionViolated):
        changed_pairs(h, 10 ** 6)
    assert all(a < b for a, b in combinations(range(3), 2))
