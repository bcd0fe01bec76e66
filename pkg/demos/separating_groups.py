"""Walk through a few constructions and print which groups they land in."""
from radokit.classifiers import classify
from radokit.reports import RunConfig, build_bundle

cfg = RunConfig()

for name in ("g1", "antiauto", "pairflip"):
    b = build_bundle(name, cfg)
    g = b.tables[name]
    report = classify(g, window=32)
    inside = [k for k, v in sorted(report.verdicts.items()) if v.positive]
    outside = [k for k, v in sorted(report.verdicts.items()) if v.refuted]
    print(f"{name:9s} in: {', '.join(inside)}")
    print(f"{'':9s} out: {', '.join(outside)}")
    for r in b.run_claims():
        print(f"{'':9s}   {r.claim.id}: {r.verdict.kind.value}{' (' + r.verdict.rule + ')' if r.verdict.rule else ''}")
