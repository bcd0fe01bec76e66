"""Deterministic back-and-forth between views, materialized as tables."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import NoWitnessWithinBound, OutOfUniverse, ParseError, PreconditionViolated, SeedInconsistent
from .nat import Nat, Shared, parse as parse_nat, render_short as render_nat
from .syntax import parse_view, render_view
from .views import ViewSpec, eval_adjacent, in_universe
from .witness import search_witness


def format_provenance(prov: dict) -> str:
    parts = [str(prov.get("id", "table"))]
    for k, v in prov.items():
        if k == "id":
            continue
        parts.append(f"{k}={_fmt_value(v)}")
    return " ".join(parts)


def _fmt_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt_value(x) for x in v) + "]"
    if isinstance(v, int) or hasattr(v, "bits"):
        return render_nat(v)
    return str(v)


def parse_provenance(text: str) -> dict:
    toks = text.split()
    if not toks:
        return {"id": "table"}
    prov: dict = {"id": toks[0]}
    for tok in toks[1:]:
        if "=" not in tok:
            raise ValueError(f"bad provenance token {tok!r}")
        k, v = tok.split("=", 1)
        prov[k] = _parse_value(v)
    return prov


def _parse_value(v: str):
    if v.startswith("[") and v.endswith("]"):
        inner = v[1:-1]
        return [_parse_value(x) for x in inner.split(",")] if inner else []
    return int(v) if v.isdigit() else v


@dataclass
class PermTable:
    """A finite piece of a permutation (or an isomorphism between views).

    ``fwd``/``inv`` hold the materialized pairs.  Tables of closed-form maps
    also carry ``lazy``/``lazy_inv`` callables, so lookups outside the
    materialized part still succeed.
    """

    source: ViewSpec
    target: ViewSpec
    fwd: dict = field(default_factory=dict)
    inv: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=lambda: {"id": "table"})
    depth: int = 0
    error: str | None = None
    lazy: Callable | None = None
    lazy_inv: Callable | None = None

    def __len__(self) -> int:
        return len(self.fwd)

    @property
    def name(self) -> str:
        return str(self.provenance.get("id", "table"))

    def has(self, v: Nat) -> bool:
        return v in self.fwd or self.lazy is not None

    def has_inv(self, w: Nat) -> bool:
        return w in self.inv or self.lazy_inv is not None

    def __call__(self, v: Nat) -> Nat:
        r = self.fwd.get(v)
        if r is not None:
            return r
        if self.lazy is not None:
            return self.lazy(v)
        raise PreconditionViolated(f"{render_nat(v)} is outside the materialized domain of {self.name}")

    def inverse(self, w: Nat) -> Nat:
        r = self.inv.get(w)
        if r is not None:
            return r
        if self.lazy_inv is not None:
            return self.lazy_inv(w)
        raise PreconditionViolated(f"{render_nat(w)} is outside the materialized range of {self.name}")

    def pairs(self) -> list[tuple[Nat, Nat]]:
        return sorted(self.fwd.items())

    def domain_prefix(self) -> int:
        """Largest n such that every source vertex below n is mapped."""
        return _prefix(self.source, self.fwd, self.lazy is not None)

    def range_prefix(self) -> int:
        return _prefix(self.target, self.inv, self.lazy_inv is not None)

    def covers(self, window: int) -> bool:
        return self.domain_prefix() >= window

    def require(self, window: int, inverse: bool = False) -> None:
        n = self.range_prefix() if inverse else self.domain_prefix()
        if n < window:
            side = "range" if inverse else "domain"
            raise PreconditionViolated(f"{self.name}: materialized {side} covers only [0,{n}), need [0,{window})")

    def materialize(self, window: int) -> "PermTable":
        """Copy with explicit pairs for every source vertex below ``window``."""
        t = self.copy()
        for v in range(window):
            if in_universe(self.source, v) and v not in t.fwd:
                w = self(v)
                t.fwd[v] = w
                t.inv[w] = v
        return t

    def copy(self) -> "PermTable":
        return PermTable(self.source, self.target, dict(self.fwd), dict(self.inv), dict(self.provenance),
                         self.depth, self.error, self.lazy, self.lazy_inv)

    def inverted(self) -> "PermTable":
        prov = dict(self.provenance)
        prov["orientation"] = "inverse"
        return PermTable(self.target, self.source, dict(self.inv), dict(self.fwd), prov, self.depth, self.error,
                         self.lazy_inv, self.lazy)

    def check(self) -> list[tuple]:
        """Pairs of pairs violating the partial-isomorphism condition."""
        items = self.pairs()
        bad = []
        if len(set(self.fwd.values())) != len(self.fwd):
            bad.append(("not injective",))
        for i, (a, b) in enumerate(items):
            for a2, b2 in items[i + 1:]:
                if eval_adjacent(self.source, a, a2) != eval_adjacent(self.target, b, b2):
                    bad.append(((a, b), (a2, b2)))
        return bad


def _prefix(view: ViewSpec, mapping: dict, total: bool, scan: int = 1 << 16) -> int:
    if total:
        return 1 << 62
    top = max((m for m in mapping if isinstance(m, int)), default=-1)
    n = 0
    while n <= top:
        if n not in mapping and in_universe(view, n):
            return n
        n += 1
    # past the largest mapped vertex the next universe vertex is unmapped
    while n <= top + scan and not in_universe(view, n):
        n += 1
    return n


PartialIso = PermTable


def _constraints(p: PermTable, v: Nat, forward: bool):
    U, V = [], []
    src = p.source if forward else p.target
    mapping = p.fwd if forward else p.inv
    for a, b in mapping.items():
        if eval_adjacent(src, v, a):
            U.append(b)
        else:
            V.append(b)
    return U, V


def forth(p: PermTable, v: Nat, bound: Nat | None = None) -> PermTable:
    """Extend p in place by v -> least target witness for v's pattern."""
    if not in_universe(p.source, v):
        raise OutOfUniverse(f"{render_nat(v)} is not a vertex of the source {p.source}")
    if v in p.fwd:
        raise PreconditionViolated(f"{render_nat(v)} is already mapped")
    U, V = _constraints(p, v, True)
    res = search_witness(p.target, U, V, 0, bound, exclude=frozenset(p.inv), stream_bound=bound)
    if res.witness is None:
        raise NoWitnessWithinBound(f"no image for {render_nat(v)} within the bound", partial=p)
    p.fwd[v] = res.witness
    p.inv[res.witness] = v
    return p


def back(p: PermTable, w: Nat, bound: Nat | None = None) -> PermTable:
    """Extend p in place by a least source preimage for the target vertex w."""
    if not in_universe(p.target, w):
        raise OutOfUniverse(f"{render_nat(w)} is not a vertex of the target {p.target}")
    if w in p.inv:
        raise PreconditionViolated(f"{render_nat(w)} is already hit")
    U, V = _constraints(p, w, False)
    res = search_witness(p.source, U, V, 0, bound, exclude=frozenset(p.fwd), stream_bound=bound)
    if res.witness is None:
        raise NoWitnessWithinBound(f"no preimage for {render_nat(w)} within the bound", partial=p)
    p.fwd[res.witness] = w
    p.inv[w] = res.witness
    return p


def _least_free(view: ViewSpec, used: dict, start: int) -> int:
    n = start
    while n in used or not in_universe(view, n):
        n += 1
    return n


def check_seed(source: ViewSpec, target: ViewSpec, seed: Iterable[tuple[Nat, Nat]]) -> dict:
    fwd: dict = {}
    for a, b in seed:
        if not in_universe(source, a):
            raise OutOfUniverse(f"seed vertex {render_nat(a)} is not in the source universe")
        if not in_universe(target, b):
            raise OutOfUniverse(f"seed image {render_nat(b)} is not in the target universe")
        if a in fwd and fwd[a] != b:
            raise SeedInconsistent(f"seed maps {render_nat(a)} twice")
        fwd[a] = b
    if len(set(fwd.values())) != len(fwd):
        raise SeedInconsistent("seed is not injective")
    items = sorted(fwd.items())
    for i, (a, b) in enumerate(items):
        for a2, b2 in items[i + 1:]:
            if eval_adjacent(source, a, a2) != eval_adjacent(target, b, b2):
                raise SeedInconsistent(f"seed pairs ({a},{b}) and ({a2},{b2}) disagree on adjacency")
    return fwd


def build_iso(source: ViewSpec, target: ViewSpec, seed=(), steps: int = 64, bound: Nat | None = None,
              provenance: dict | None = None) -> PermTable:
    """Alternate forth (least unmapped source vertex) and back (least unhit
    target vertex), ``steps`` times, starting from ``seed``.

    If a step finds nothing below ``bound`` the partial table is returned
    with ``error`` set.
    """
    fwd = check_seed(source, target, seed)
    prov = dict(provenance or {"id": "iso"})
    prov.setdefault("method", "backforth")
    p = PermTable(source, target, fwd, {b: a for a, b in fwd.items()}, prov, 0)
    return extend(p, steps, bound)


def extend(p: PermTable, steps: int, bound: Nat | None = None) -> PermTable:
    """Run further alternation rounds on p (in place); idempotent prefixes."""
    cur_s = 0
    cur_t = 0
    for _ in range(steps):
        try:
            if p.depth % 2 == 0:
                cur_s = _least_free(p.source, p.fwd, cur_s)
                forth(p, cur_s, bound)
            else:
                cur_t = _least_free(p.target, p.inv, cur_t)
                back(p, cur_t, bound)
        except NoWitnessWithinBound as e:
            p.error = str(e)
            return p
        p.depth += 1
    return p


def add_point(p: PermTable, v: Nat, bound: Nat | None = None) -> Nat:
    """Map one more (arbitrary) source vertex, keeping everything else."""
    if v not in p.fwd:
        forth(p, v, bound)
    return p.fwd[v]


# -- text format ------------------------------------------------------------------

_HEADER = ("provenance", "source", "target", "depth")


def dump_table(p: PermTable, window: int | None = None) -> str:
    """Text form; lazy tables are materialized on [0, window)."""
    if window is not None and p.lazy is not None:
        p = p.materialize(window)
    lines = [
        f"# provenance: {format_provenance(p.provenance)}",
        f"# source: {render_view(p.source)}",
        f"# target: {render_view(p.target)}",
        f"# depth: {p.depth}",
    ]
    if p.error:
        lines.append(f"# error: {p.error}")
    sh = Shared()
    rows = [f"{sh.render(a)}\t{sh.render(b)}" for a, b in p.pairs()]
    lines.extend(f"= {name}\t{body}" for name, body in sh.defs)
    lines.extend(rows)
    return "\n".join(lines) + "\n"


def write_table(p: PermTable, path, window: int | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_table(p, window))


_HEAD_RE = re.compile(r"#\s*([a-z]+):\s?(.*)$")


def load_table(text: str) -> PermTable:
    head: dict = {}
    fwd: dict = {}
    inv: dict = {}
    env: dict = {}
    last = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if line.startswith("= "):
            name, _, body = line[2:].partition("\t")
            if not re.fullmatch(r"t\d+", name) or name in env or fwd:
                raise ParseError("malformed definition line", lineno)
            try:
                env[name] = parse_nat(body, env)
            except ValueError as e:
                raise ParseError(str(e), lineno)
            continue
        if line.startswith("#"):
            m = _HEAD_RE.match(line)
            if not m:
                raise ParseError("malformed header line", lineno)
            if fwd:
                raise ParseError("header after table rows", lineno)
            head[m.group(1)] = m.group(2)
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("expected 'i<TAB>g(i)'", lineno)
        try:
            a, b = parse_nat(parts[0], env), parse_nat(parts[1], env)
        except ValueError as e:
            raise ParseError(str(e), lineno)
        if last is not None and not a > last:
            raise ParseError("rows must be sorted by i without repeats", lineno)
        if b in inv:
            raise ParseError(f"value {parts[1]} repeated: not injective", lineno)
        last = a
        fwd[a] = b
        inv[b] = a
    for key in _HEADER:
        if key not in head:
            raise ParseError(f"missing header '# {key}:'")
    try:
        source = parse_view(head["source"])
        target = parse_view(head["target"])
        prov = parse_provenance(head["provenance"])
        depth = int(head["depth"])
    except (ParseError, ValueError) as e:
        raise ParseError(f"bad header: {e}")
    t = PermTable(source, target, fwd, inv, prov, depth, head.get("error"))
    if prov.get("method") == "finitary" and isinstance(prov.get("support"), list):
        # outside its support a finitary permutation is the identity
        t.lazy = lambda v: fwd.get(v, v)
        t.lazy_inv = lambda w: inv.get(w, w)
    return t


def read_table(path) -> PermTable:
    with open(path, encoding="utf-8") as fh:
        return load_table(fh.read())
