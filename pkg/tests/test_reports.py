import json

import pytest

from radokit.classifiers import RULES
from radokit.core import Kind
from radokit.reports import (DIAGRAM, DIAGRAM_BUNDLES, RELATIONS, SUITES, RunConfig, build_bundle, diagram_document,
                             dumps, inclusion_diagram, run_suite, suite_document, switching_composition)


@pytest.fixture(scope="module")
def edges(bundle):
    return inclusion_diagram(RunConfig(), {b: bundle(b) for b in DIAGRAM_BUNDLES})


def test_run_config_validation():
    assert RunConfig().d == 2 and RunConfig(depth=4).d == 4
    for bad in ({"window": 0}, {"k_max": -1}, {"steps": True}, {"bound": 0}):
        with pytest.raises(ValueError):
            RunConfig(**bad)
    assert "out" not in RunConfig(out="x").to_json()


def test_build_bundle_rejects_unknown_parameters():
    with pytest.raises(TypeError):
        build_bundle("g1", RunConfig(), stages=3)


def test_diagram_relations_and_validity(edges):
    assert len(edges) == len(DIAGRAM)
    assert all(e.relation in RELATIONS for e in edges)
    assert all(e.valid for e in edges), [(e.lower, e.upper) for e in edges if not e.valid]
    assert all(r in RULES for e in edges for r in e.rules)
    pairs = [(e.lower, e.upper) for e in edges]
    assert len(set(pairs)) == len(pairs)


def test_diagram_marks_open_strictness(edges):
    open_edges = [e for e in edges if e.strictness == "unknown"]
    assert [(e.lower, e.upper, e.relation) for e in open_edges] == [("AutH·FSym", "FAutH", "subgroup")]


def test_strict_edges_cite_evidence_or_rules(edges):
    for e in edges:
        if e.relation in ("strict-subgroup", "incomparable", "not-subgroup"):
            if e.strictness == "certified":
                # a separating element needs at least one exact verdict behind it
                assert any(v.kind is not Kind.SUPPORTED for _, _, v, _, _ in e.evidence), (e.lower, e.upper)
            else:
                assert e.strictness == "asserted" and e.rules


def test_diagram_chain_edges_present(edges):
    got = {(e.lower, e.upper): e.relation for e in edges}
    for lo, hi in [("Aut", "Aut1"), ("Aut1", "Aut2"), ("Aut2", "Aut3"), ("Aut", "S"), ("Aut", "D"),
                   ("FAutH", "AutStarH"), ("B", "AutStarH")]:
        assert got[(lo, hi)] == "strict-subgroup"
    assert got[("Aut3", "AutFilter")] == "incomparable"
    assert got[("FSym", "Aut2")] == "trivial-intersection"


def test_diagram_document_is_deterministic(edges):
    a = dumps(diagram_document(edges, RunConfig()))
    b = dumps(diagram_document(edges, RunConfig()))
    assert a == b and a.endswith("\n")
    doc = json.loads(a)
    assert doc["valid"] and doc["kind"] == "diagram" and len(doc["edges"]) == len(DIAGRAM)


def test_switching_composition_report():
    ok, detail = switching_composition(20, 12, 24)
    assert ok and detail


@pytest.mark.parametrize("suite", [s for s in SUITES if s != "constructions"])
def test_suites_pass(suite):
    cfg = RunConfig(depth=2)
    res = run_suite(suite, cfg)
    assert res and all(r.ok for r in res), [r.id for r in res if not r.ok]
    assert [r.id for r in res] == sorted(r.id for r in res)
    doc = suite_document(suite, res, cfg)
    assert json.loads(dumps(doc))["kind"] == "verify"


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", RunConfig())
