"""radokit command line: verify, construct, classify, diagram.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 resource exhaustion.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .backforth import read_table
from .classifiers import classify
from .constructions import CONSTRUCTIONS
from .core import RadoError, ResourceExhausted
from .reports import (SUITES, RunConfig, build_bundle, dumps, membership_document, run_suite, suite_document,
                      write_diagram, write_json)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

# construction parameters accepted on the command line
_PARAMS = ("p", "q", "v", "w", "a", "b", "stages")


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def _cycles(text: str) -> tuple:
    """'(0,1)(2,3,4)' -> ((0, 1), (2, 3, 4))"""
    body = text.replace(" ", "")
    if not body.startswith("(") or not body.endswith(")"):
        raise argparse.ArgumentTypeError(f"cycles look like (0,1)(2,3): {text!r}")
    try:
        return tuple(tuple(int(x) for x in c.split(",")) for c in body[1:-1].split(")("))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cycles look like (0,1)(2,3): {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--window", type=_positive, default=64)
    p.add_argument("--depth", type=_positive, default=None, help="pair size d (default 2; core and constructions keep their own)")
    p.add_argument("--kmax", type=_positive, default=3)
    p.add_argument("--smax", type=_positive, default=8)
    p.add_argument("--steps", type=_positive, default=64)
    p.add_argument("--bound", type=_positive, default=None)
    p.add_argument("--out", default=None)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="radokit", description="Certificate-carrying checks on the Rado graph.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    _common(v)

    c = sub.add_parser("construct", help="build a construction bundle")
    c.add_argument("name", choices=sorted(CONSTRUCTIONS))
    _common(c)
    for name in _PARAMS:
        c.add_argument(f"--{name}", type=int, default=None)
    c.add_argument("--cycles", type=_cycles, default=None)

    k = sub.add_parser("classify", help="membership report for a table file")
    k.add_argument("table")
    _common(k)

    d = sub.add_parser("diagram", help="the inclusion diagram with its evidence bundles")
    _common(d)
    return ap


def _config(args) -> RunConfig:
    return RunConfig(window=args.window, depth=args.depth, k_max=args.kmax, s_max=args.smax,
                     steps=args.steps, bound=args.bound, out=args.out)


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def cmd_verify(args) -> int:
    cfg = _config(args)
    results = run_suite(args.suite, cfg)
    doc = suite_document(args.suite, results, cfg)
    for r in results:
        _emit(f"{'ok  ' if r.ok else 'FAIL'} {r.id}\n")
    for r in results:
        if not r.ok:
            _emit(f"--- {r.id}\n{dumps(r.detail)}")
    if cfg.out:
        write_json(Path(cfg.out) / f"verify-{args.suite}.json", doc)
    return EXIT_OK if doc["ok"] else EXIT_FAIL


def _construction_params(args) -> dict:
    params = {}
    for name in ("p", "q", "v", "w", "stages", "cycles"):
        val = getattr(args, name)
        if val is not None:
            params[name] = val
    if args.a is not None:
        params["a"] = args.a
    if args.b is not None:
        params["b_"] = args.b
    if args.depth is not None:
        params["d"] = args.depth
    return params


def cmd_construct(args) -> int:
    cfg = _config(args)
    try:
        b = build_bundle(args.name, cfg, **_construction_params(args))
    except TypeError as e:
        raise UsageError(str(e))
    root = b.write(cfg.out or "radokit-out")
    for r in b.run_claims():
        _emit(f"{'ok  ' if r.ok else 'FAIL'} {b.id}.{r.claim.id} {r.verdict.kind.value}\n")
    _emit(f"wrote {root.as_posix()}\n")
    return EXIT_OK if b.ok else EXIT_FAIL


def cmd_classify(args) -> int:
    cfg = _config(args)
    g = read_table(args.table)
    report = classify(g, cfg.window, cfg.d, cfg.k_max, cfg.s_max)
    doc = membership_document(report, Path(args.table).name, cfg)
    if cfg.out:
        write_json(Path(cfg.out) / "membership.json", doc)
    _emit(dumps(doc))
    return EXIT_OK


def cmd_diagram(args) -> int:
    cfg = _config(args)
    edges, path = write_diagram(cfg, cfg.out or "radokit-out")
    for e in edges:
        tag = e.relation + (f" ({e.strictness})" if e.strictness else "")
        _emit(f"{'ok  ' if e.valid else 'FAIL'} {e.lower} / {e.upper}: {tag}\n")
    _emit(f"wrote {path.as_posix()}\n")
    return EXIT_OK if all(e.valid for e in edges) else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "construct": cmd_construct, "classify": cmd_classify, "diagram": cmd_diagram}


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except ResourceExhausted as e:
        print(f"radokit: resource exhausted: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, RadoError, OSError) as e:
        print(f"radokit: {args.cmd}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
