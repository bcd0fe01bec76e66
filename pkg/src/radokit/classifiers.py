"""Window-bounded, certificate-carrying membership evidence for the
overgroups of Aut(R), and the C(g) calculus.

Every verdict answers a positive claim ("g lies in G", "Y lies in the
filter", ...).  Refuted verdicts carry a certificate that can be re-checked
with plain adjacency queries; ExactlySettled verdicts name a rule from
:data:`RULES`; everything else is SupportedUpTo, possibly flagged
``against`` when the window points the other way.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations

from .backforth import PermTable, back
from .core import (EmptyEdgeFamily, FinitePairUV, Kind, PreconditionViolated, RadoError, Verdict, adjacent,
                   evidence_against, jsonable, least_base, refuted, settled, supported)
from .nat import Nat
from .streams import Stream as StreamObj, get_stream, register
from .symbolic import (common_neighbours_empty, cofinite_universe, flip_free, flip_profile,
                       neighbour_classes, realize, stream_free)
from .views import (All, Base, Diff, Finite, FlipWithin, Nbhd, Restrict, SetSpec, Stream, Switch, Union,
                    ViewSpec, _adj, in_universe, set_member)
from .witness import extension_evidence

GROUPS = ("Aut", "Aut1", "Aut2", "Aut3", "AutFilter", "AutH", "AutStarH", "B", "D", "FAutH", "S")

# Symbolic rules that may grant ExactlySettled (or back a rule-based refutation).
RULES = {
    "universal-vertex": "a vertex adjacent to every other vertex of a set leaves (∅,{v}) without witness",
    "independent-stream": "a greedily built independent stream admits no witness adjacent to a member",
    "witness-set-copy": "W(U,V) induces a copy of the Rado graph",
    "pattern-exhaustion": "finitely many anchor patterns plus points cover every vertex of a stream-free view",
    "g5-condition-1": "condition 1 of the g5 construction makes b_n isolated in the switched E_n",
    "switching-iso": "an isomorphism from Base onto a switched copy is a switching automorphism",
    "iso-flip-profile": "for an isomorphism from Base onto a view, C(g) is the view's flip relation pulled back",
    "filter-contradiction": "Base and view neighbourhoods of the listed vertices have empty common part",
    "finitary": "finitary permutations lie in Aut3 ∩ Aut(F_R) and FAut(H) and meet Aut2, Aut(H) trivially",
    "aut2-in-filter": "Aut2 ≤ Aut(F_R)",
    "aut2-in-auth": "Aut2 ≤ Aut(H)",
    "aut3-in-fauth": "Aut3 ≤ FAut(H)",
    "d-in-auth": "D(R) ≤ Aut(H), the Rado graph being self-complementary",
    "s-in-autstar": "S(R) ≤ Aut*(H)",
    "b-in-autstar": "B(R) ≤ Aut*(H)",
    "fauth-in-autstar": "FAut(H) ≤ Aut*(H)",
    "reduct-chain": "Aut ≤ S ≤ B and Aut ≤ D ≤ B",
    "aut-chain": "Aut ≤ Aut1 ≤ Aut2 ≤ Aut3",
    "image-independent": "the construction maps the set into an independent stream",
    "isolated-image": "an isomorphism carries a vertex isolated inside a set to one isolated inside the image",
    "finite-check": "a statement about finitely many listed vertices, checked directly",
    "cg-identities": "C(g^-1) is the image of C(g) under g, and C(gh) ⊆ C(g) ∪ preimage of C(h) under g",
}


# -- tables -----------------------------------------------------------------------


def identity_table(provenance: dict | None = None) -> PermTable:
    prov = dict(provenance or {"id": "identity", "method": "finitary", "support": []})
    return PermTable(Base(), Base(), {}, {}, prov, 0, None, lambda v: v, lambda v: v)


def compose(g: PermTable, h: PermTable, window: int | None = None) -> PermTable:
    """g then h (right action: x -> h(g(x)))."""
    prov = {"id": f"{g.name}*{h.name}", "method": "composite"}
    if g.lazy is not None and h.lazy is not None:
        return PermTable(g.source, h.target, {}, {}, prov, 0, None, lambda v: h(g(v)),
                         lambda w: g.inverse(h.inverse(w)))
    fwd = {}
    for a, b in g.fwd.items():
        if h.has(b):
            try:
                fwd[a] = h(b)
            except PreconditionViolated:
                pass
    return PermTable(g.source, h.target, fwd, {b: a for a, b in fwd.items()}, prov)


def _require(g: PermTable, window: int, inverse: bool = False) -> list:
    view = g.target if inverse else g.source
    g.require(window, inverse)
    return [x for x in range(window) if in_universe(view, x)]


def _finitary_support(g: PermTable):
    if g.provenance.get("method") != "finitary":
        return None
    sup = g.provenance.get("support", [])
    return sorted(sup) if isinstance(sup, list) else []


def _is_backforth(g: PermTable) -> bool:
    return g.provenance.get("method") == "backforth"


# -- C(g) -------------------------------------------------------------------------


@dataclass
class ChangedPairSet:
    """C(g) restricted to a window: pairs (v, w), v < w, whose adjacency g changes."""

    pairs: frozenset
    window: int

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return (min(a, b), max(a, b)) in self.pairs

    def recheck(self, g: PermTable) -> bool:
        for a, b in self.pairs:
            if adjacent(a, b) == adjacent(g(a), g(b)):
                return False
        return True

    def to_json(self) -> dict:
        return {"window": self.window, "pairs": [list(p) for p in sorted(self.pairs)]}


def changed_pairs(g: PermTable, window: int) -> ChangedPairSet:
    xs = _require(g, window)
    img = {x: g(x) for x in xs}
    out = set()
    for i, a in enumerate(xs):
        ga = img[a]
        for b in xs[i + 1:]:
            if adjacent(a, b) != adjacent(ga, img[b]):
                out.add((a, b))
    return ChangedPairSet(frozenset(out), window)


def changes_at(g: PermTable, v: Nat, window: int) -> list:
    xs = _require(g, window)
    gv = g(v)
    return [w for w in xs if w != v and adjacent(v, w) != adjacent(gv, g(w))]


def _changed_on(t: PermTable, verts) -> set:
    verts = list(verts)
    img = [t(v) for v in verts]
    out = set()
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if adjacent(verts[i], verts[j]) != adjacent(img[i], img[j]):
                out.add(frozenset((verts[i], verts[j])))
    return out


def cg_identities_check(g: PermTable, h: PermTable, window: int) -> Verdict:
    """Check C(g^-1) = image of C(g) under g, and C(gh) ⊆ C(g) ∪ preimage of
    C(h) under g, on the part of [0, window) where all maps are known.

    Each side is computed as its own set from its own table (g^-1 from the
    inverted table, gh from the composite), so a refutation means a bug.
    """
    def known(t, x, inv=False):
        try:
            return t.inverse(x) if inv else t(x)
        except PreconditionViolated:
            return None

    gi = g.inverted()
    gh = compose(g, h)
    xs = [x for x in range(window)
          if known(g, x) is not None and known(g, x, True) is not None and known(gh, x) is not None]
    c_ginv = _changed_on(gi, xs)
    pre = [gi(x) for x in xs]
    pushed = {frozenset(g(v) for v in p) for p in _changed_on(g, pre)}
    if c_ginv != pushed:
        bad = sorted(tuple(sorted(p)) for p in c_ginv ^ pushed)[0]
        return refuted({"identity": "inverse", "pair": list(bad)}, window)
    c_gh = _changed_on(gh, xs)
    c_g = _changed_on(g, xs)
    imgs = [g(x) for x in xs]
    back = {frozenset(gi(y) for y in p) for p in _changed_on(h, imgs)}
    extra = c_gh - (c_g | back)
    if extra:
        bad = sorted(tuple(sorted(p)) for p in extra)[0]
        return refuted({"identity": "product", "pair": list(bad)}, window)
    return settled("cg-identities", window=window, region=len(xs), changed_inverse=len(c_ginv),
                   changed_product=len(c_gh))


# -- parity reducts ----------------------------------------------------------------


def parity_preservation(g: PermTable, window: int, k: int) -> Verdict:
    """Does g preserve the odd-edge-count k-sets (k = 3, 4, 5) inside the window?"""
    if k not in (3, 4, 5):
        from .core import BadArity
        raise BadArity(f"parity hyperedges have 3, 4 or 5 vertices, got {k}")
    xs = _require(g, window)
    n = len(xs)
    img = [g(x) for x in xs]
    ch = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if adjacent(xs[i], xs[j]) != adjacent(img[i], img[j]):
                ch[i] |= 1 << j
                ch[j] |= 1 << i
    tested = 0
    for S in combinations(range(n), k):
        tested += 1
        m = 0
        for i in S:
            m |= 1 << i
        c = sum(bin(ch[i] & m).count("1") for i in S) // 2
        if c % 2:
            verts = [xs[i] for i in S]
            before = sum(1 for a, b in combinations(verts, 2) if adjacent(a, b))
            after = sum(1 for a, b in combinations(verts, 2) if adjacent(g(a), g(b)))
            return refuted({"set": verts, "edges_before": before, "edges_after": after}, window, k)
    return supported(window, k, tested=tested)


def recheck_parity_certificate(g: PermTable, cert: dict) -> bool:
    verts = cert["set"]
    before = sum(1 for a, b in combinations(verts, 2) if adjacent(a, b))
    after = sum(1 for a, b in combinations(verts, 2) if adjacent(g(a), g(b)))
    return before % 2 != after % 2


# -- the neighbourhood filter ----------------------------------------------------------


def _provable_filter_member(Y: SetSpec, T) -> bool:
    """Exact test that every common neighbour of T lies in Y, up to finitely
    many points (which further generators can always exclude)."""
    from .symbolic import atoms, patterns
    from .views import set_member_generic
    anchors, _ = atoms(Y, list(T))
    for pat in patterns(anchors, {t: True for t in T}):
        if not set_member_generic(Y, pat):
            return False
    return True


def filter_member(Y: SetSpec, window: int, k_max: int) -> Verdict:
    """Is Y in the filter generated by the Base neighbourhoods?"""
    xs = list(range(window))
    masks = []
    for t in xs:
        m = 0
        for z in xs:
            if z != t and adjacent(t, z):
                m |= 1 << z
        masks.append(m)
    ymask = 0
    for z in xs:
        if set_member(Y, z):
            ymask |= 1 << z
    exact = stream_free(Y)
    if exact:
        from .symbolic import atoms
        anchors, _ = atoms(Y)
        # the filter only sees anchors: try every anchor subset as generators
        for r in range(len(anchors) + 1):
            for T in combinations(anchors, r):
                if T and _provable_filter_member(Y, T):
                    return settled("pattern-exhaustion", cert={"T": list(T)}, window=window, depth=k_max)
        witnesses = {}
        from .symbolic import patterns, atoms as _atoms
        from .views import set_member_generic
        anch, pts = _atoms(Y)
        for r in range(len(anch) + 1):
            for T in combinations(anch, r):
                for pat in patterns(anch, {t: True for t in T}):
                    if not set_member_generic(Y, pat):
                        witnesses[",".join(map(str, T))] = realize(pat, pts)
                        break
        return refuted({"anchors": anch, "outside_common_neighbour": witnesses}, window, k_max,
                       rule="pattern-exhaustion",
                       note="every choice of generators has common neighbours outside the set")
    found = None
    for r in range(1, k_max + 1):
        for T in combinations(xs, r):
            m = masks[T[0]]
            for t in T[1:]:
                m &= masks[t]
            if m and not m & ~ymask:
                found = T
                break
        if found:
            break
    if found:
        return supported(window, k_max, cert={"T": list(found)})
    return evidence_against(window, k_max, note=f"no generator set of size <= {k_max} inside the window")


def filter_contradiction(g: PermTable, tries: int = 6) -> dict | None:
    """For an isomorphism g from Base onto a stream-free view, find target
    vertices whose Base and view neighbourhoods have no common vertex.

    Both R(x) and R(g^-1 x)^g (the view neighbourhood of x) would lie in the
    filter if g preserved it, and filter sets are never empty.
    """
    if not (_is_backforth(g) and flip_free(g.source) and stream_free(g.target)
            and cofinite_universe(g.target)):
        return None
    from .symbolic import atoms, patterns
    from .views import universe_generic
    anchors, points = atoms(g.target)
    cands = [p for p in points if in_universe(g.target, p)]
    for pat in patterns(anchors):
        if universe_generic(g.target, pat):
            cands.append(realize(pat, points))
    seen = []
    for x in cands:
        if x not in seen:
            seen.append(x)
    cands = seen[: max(tries, len(seen))]
    for x in cands:
        if common_neighbours_empty(g.target, [x]) is None:
            return {"vertices": [x]}
    for x, y in combinations(cands, 2):
        if common_neighbours_empty(g.target, [x, y]) is None:
            return {"vertices": [x, y]}
    return None


def recheck_filter_contradiction(view: ViewSpec, cert: dict, window: int) -> bool:
    xs = cert["vertices"]
    for z in range(window):
        if z in xs or not in_universe(view, z):
            continue
        if all(adjacent(z, x) and _adj(view, z, x) for x in xs):
            return False
    return True


def aut_filter_evidence(g: PermTable, window: int, k_max: int) -> Verdict:
    """Per vertex v < window, look for generators T ∋ g(v) with
    ∅ ≠ ∩ R(t) ∩ Y ⊆ R(v)^g, where Y is [0,window) together with the
    materialized range of g (images of small vertices can be huge, and
    their neighbours below the window may be too few to see)."""
    vs = _require(g, window)
    ys = _require(g, window, inverse=True)
    ys += sorted(y for y in g.inv if not y < window)
    pos = {y: i for i, y in enumerate(ys)}
    masks = {}
    for t in ys:
        m = 0
        for z in ys:
            if z != t and adjacent(t, z):
                m |= 1 << pos[z]
        masks[t] = m
    pre = {y: g.inverse(y) for y in ys}
    found: dict = {}
    failing = []
    probes: dict = {}
    for v in vs:
        gv = g(v)
        img = 0
        base = 0
        for y in ys:
            if y != gv and adjacent(pre[y], v):
                img |= 1 << pos[y]
            if y != gv and adjacent(gv, y):
                base |= 1 << pos[y]
        T = _filter_search(base, img, ys, masks, k_max - 1, gv)
        if T is not None:
            T = [gv] + T
        elif v in masks:
            # generators through v itself: R(v) ∩ ... ⊆ R(v)^g
            T = _filter_search(masks[v], img, ys, masks, k_max - 1, v)
            if T is not None:
                T = [v] + T
        if T is None and k_max >= 2:
            T = _probe_beyond(g, v, gv, base, img, ys, masks, probes)
            if T is not None:
                T = [gv] + T
        if T is None:
            failing.append(v)
        else:
            found[v] = T
    stats = {"vertices": len(vs), "positive": len(found), "k_max": k_max, "universe": len(ys),
             "probed": len(probes)}
    sample = {v: found[v] for v in sorted(found)[:8]}
    if failing:
        return evidence_against(window, k_max, note=f"{len(failing)} vertex/vertices without generators in the window",
                                cert={"failing": failing[:16], "found": sample}, **stats)
    return supported(window, k_max, cert={"found": sample}, **stats)


def _probe_beyond(g, v, gv, base, img, ys, masks, probes, tries: int = 8):
    """When no known vertex is a common neighbour of {g(v), t}, map the least
    such vertex back through a copy of g and test it."""
    done = 0
    for t in ys:
        if t == gv or base & masks[t] & ~img:
            continue
        key = (gv, t)
        if key not in probes:
            z = least_base((gv, t), (), 0, frozenset(y for y in ys if y not in (gv, t)))
            ok = None
            if in_universe(g.target, z):
                try:
                    if g.has_inv(z):
                        ok = g.inverse(z)
                    else:
                        t2 = g.copy()
                        back(t2, z)
                        ok = t2.inverse(z)
                except RadoError:
                    ok = None
            probes[key] = (z, ok)
        z, pre_z = probes[key]
        if pre_z is not None and adjacent(pre_z, v):
            return [t]
        done += 1
        if done >= tries:
            break
    return None


def _filter_search(base, img, ys, masks, extra, gv):
    if base and not base & ~img:
        return []
    if extra <= 0:
        return None
    for r in range(1, extra + 1):
        for T in combinations([y for y in ys if y != gv], r):
            m = base
            for t in T:
                m &= masks[t]
                if not m:
                    break
            if m and not m & ~img:
                return list(T)
    return None


# -- edges of H ----------------------------------------------------------------------------


def copy_evidence(view: ViewSpec, S: SetSpec, window: int, d: int, bound: int | None = None) -> Verdict:
    """Does S induce a copy of the Rado graph in the view?"""
    if d < 1:
        raise ValueError("depth must be at least 1")
    if type(S) is Stream:
        st = get_stream(S.name)
        if st.facts.get("independent") and flip_free(view):
            try:
                d0 = st.nth(0)
            except IndexError:
                d0 = None
            if d0 is not None:
                return refuted(FinitePairUV((d0,), ()), window, d, rule=st.facts.get("rule", "independent-stream"),
                               note="the set is independent, so nothing in it is adjacent to its least element")
    return extension_evidence(Restrict(view, S), window, d, bound)


def isolated_vertex_cert(view: ViewSpec, S: SetSpec, x: Nat, window: int) -> Verdict:
    """Is x isolated inside S in the view?"""
    if not set_member(S, x):
        raise PreconditionViolated(f"{x} is not in the set {S}")
    if type(S) is Stream:
        facts = get_stream(S.name).facts
        iso = facts.get("isolated")
        if iso and iso.get("vertex") == x and iso.get("view") == str(view):
            nbrs = [y for y in get_stream(S.name).below(window) if y != x and _adj(view, x, y)]
            if nbrs:
                return refuted({"vertex": x, "neighbour": nbrs[0]}, window)
            return settled(iso.get("rule", "g5-condition-1"), cert={"vertex": x}, window=window)
    if stream_free(view) and stream_free(S):
        y = neighbour_classes(view, S, x)
        if y is not None:
            return refuted({"vertex": x, "neighbour": y}, window, rule="pattern-exhaustion")
        scanned = sum(1 for z in range(window) if in_universe(view, z) and set_member(S, z))
        return settled("pattern-exhaustion", cert={"vertex": x}, window=window, scanned=scanned)
    for y in range(window):
        if y != x and in_universe(view, y) and set_member(S, y) and _adj(view, x, y):
            return refuted({"vertex": x, "neighbour": y}, window)
    return supported(window, 0)


def recheck_isolated(view: ViewSpec, S: SetSpec, cert: dict) -> bool:
    """A refuting certificate is a neighbour of the vertex inside S."""
    x, y = cert["vertex"], cert["neighbour"]
    return y != x and set_member(S, y) and in_universe(view, y) and _adj(view, x, y)


# image sets (E∖S)g as streams over the materialized part of g

_IMAGE_FACTS: dict = {}


def declare_image_facts(table_id: str, E: SetSpec, facts: dict) -> None:
    """Record what a construction knows about images of E under its table."""
    _IMAGE_FACTS[(table_id, str(E))] = dict(facts)


def image_set(g: PermTable, E: SetSpec, S=(), inverse: bool = False, limit: int | None = None) -> SetSpec:
    """(E∖S)g, or (E∖S)g^-1.

    Finitary permutations give an exact set expression; other tables give
    a stream truncated where the table stops being known.
    """
    S = frozenset(S)
    sup = _finitary_support(g)
    if sup is not None and g.lazy is not None:
        E2 = Diff(E, Finite(tuple(S))) if S else E
        f = g.inverse if inverse else g
        moved = [f(x) for x in sup if set_member(E2, x)]
        if not sup:
            return E2
        return Union(Diff(E2, Finite(tuple(sup))), Finite(tuple(moved)))
    if limit is None:
        if inverse:
            limit = g.domain_prefix()
        else:
            limit = g.range_prefix()
        limit = min(limit, 1 << 16)
    key = f"{g.name}|{g.depth}|{len(g.fwd)}|{E}|{sorted(S)}|{inverse}|{limit}"
    name = "img." + hashlib.sha1(key.encode()).hexdigest()[:16]
    view = g.source if inverse else g.target

    def factory(st):
        for x in range(limit):
            st.charge()
            if not in_universe(view, x):
                continue
            y = g(x) if inverse else g.inverse(x)
            if y not in S and set_member(E, y):
                yield x

    facts = {"truncated_at": limit}
    known = _IMAGE_FACTS.get((g.provenance.get("id"), str(E)))
    if known and not inverse:
        facts.update(known)
    register(StreamObj(name, factory, facts))
    return Stream(name)


def _image_copy(g, E, S, window, d, inverse, view=None) -> Verdict:
    img = image_set(g, E, S, inverse)
    v = view if view is not None else Base()
    return copy_evidence(v, img, window, d)


def autstar_evidence(g: PermTable, E: SetSpec, window: int, d: int, s_max: int):
    """Look for a finite S ⊆ E ∩ [0, s_max) with (E∖S)g and (E∖S)g^-1 both
    passing copy_evidence.  Returns (verdict, S or None)."""
    cand = [x for x in range(s_max) if set_member(E, x)]
    fails = []
    for r in range(len(cand) + 1):
        for S in combinations(cand, r):
            fw = _image_copy(g, E, S, window, d, False)
            if fw.refuted:
                fails.append({"S": list(S), "direction": "g", "verdict": fw})
                continue
            bw = _image_copy(g, E, S, window, d, True)
            if bw.refuted:
                fails.append({"S": list(S), "direction": "g^-1", "verdict": bw})
                continue
            note = None
            if fw.note or bw.note:
                note = "image sets are truncated where the table ends"
            return supported(window, d, note=note, cert={"S": list(S)}), list(S)
    rules = {f["verdict"].rule for f in fails}
    if len(rules) == 1 and None not in rules and len(fails) == 2 ** len(cand):
        return refuted({"subsets_tried": len(fails), "sample": fails[:2]}, window, d, rule=rules.pop(),
                       note=f"every S ⊆ E ∩ [0,{s_max}) fails"), None
    return evidence_against(window, d, cert={"subsets_tried": len(fails), "sample": fails[:2]},
                            note=f"no S ⊆ E ∩ [0,{s_max}) works on the window"), None


def faut_evidence(g: PermTable, edges, window: int, d: int, s_max: int):
    """One finite S ⊆ [0, s_max) serving every listed edge.  Returns
    (verdict, S or None)."""
    edges = list(edges)
    if not edges:
        raise EmptyEdgeFamily("faut_evidence needs at least one edge")
    sup = _finitary_support(g)
    order = []
    if sup is not None and all(x < s_max for x in sup):
        order.append(tuple(sup))
    for r in range(s_max + 1):
        order.extend(combinations(range(s_max), r))
    seen = set()
    tried = 0
    last_fail = None
    for S in order:
        if S in seen:
            continue
        seen.add(S)
        tried += 1
        ok = True
        for E in edges:
            for inv in (False, True):
                v = _image_copy(g, E, S, window, d, inv)
                if v.refuted:
                    ok = False
                    last_fail = {"S": list(S), "edge": str(E), "direction": "g^-1" if inv else "g", "verdict": v}
                    break
            if not ok:
                break
        if ok:
            return supported(window, d, cert={"S": list(S)}, subsets_tried=tried), list(S)
        if tried >= 64:
            break
    return evidence_against(window, d, cert=last_fail, subsets_tried=tried,
                            note="no common finite S found among the subsets tried"), None


# -- membership report --------------------------------------------------------------------


@dataclass
class MembershipReport:
    verdicts: dict
    parameters: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"parameters": jsonable(self.parameters),
                "verdicts": {k: self.verdicts[k].to_json() for k in sorted(self.verdicts)}}


def _growth(g, window):
    sizes = sorted({max(4, window // 8), max(4, window // 4), max(4, window // 2), window})
    total = []
    per_vertex = []
    for w in sizes:
        C = changed_pairs(g, w)
        total.append(len(C))
        deg: dict = {}
        for a, b in C.pairs:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        per_vertex.append(max(deg.values(), default=0))
    return sizes, total, per_vertex


def _increasing_tail(xs) -> bool:
    return len(xs) >= 3 and xs[-1] > xs[-2] > xs[-3]


def _iso_profile(g: PermTable):
    if not (_is_backforth(g) and flip_free(g.source) and stream_free(g.target)
            and cofinite_universe(g.target) and cofinite_universe(g.source)):
        return None
    return flip_profile(g.target)


def classify(g: PermTable, window: int = 64, d: int = 2, k_max: int = 3, s_max: int = 8,
             edges=None) -> MembershipReport:
    """Evidence for all eleven groups.  Windows are cut down to the
    materialized part of g, and the report records the effective value."""
    limit = min(g.domain_prefix(), g.range_prefix())
    w = max(1, min(window, limit))
    V: dict = {}
    sizes, total, per_vertex = _growth(g, w)
    growth = {"windows": sizes, "changed_pairs": total, "max_changes_at_a_vertex": per_vertex}
    C = changed_pairs(g, w)
    prof = _iso_profile(g)
    sup = _finitary_support(g)
    identity_like = not C.pairs

    # Aut
    if C.pairs:
        a, b = min(C.pairs)
        V["Aut"] = refuted({"pair": [a, b], "before": adjacent(a, b), "after": adjacent(g(a), g(b))}, w)
    elif prof is not None and not (prof["gg"] or prof["gp"] or prof["pp"]):
        V["Aut"] = settled("iso-flip-profile", window=w)
    else:
        V["Aut"] = supported(w)

    # Aut1..Aut3
    note = "finiteness is not decidable from a window; growth statistics only"
    if prof is not None:
        gen = prof["generic"]
        cert = {"target": str(g.target), "profile": {k: prof[k] for k in ("gg", "gp", "pp", "inf_generic", "inf_points")},
                "generic_patterns": [_pat_json(p) for p in gen]}
        aut1 = not (prof["gg"] or prof["gp"])
        aut2 = not (prof["inf_generic"] or prof["inf_points"])
        aut3 = not prof["inf_generic"]
        for name, ok in (("Aut1", aut1), ("Aut2", aut2), ("Aut3", aut3)):
            if ok:
                V[name] = settled("iso-flip-profile", cert=cert, window=w, **growth)
            else:
                ex = _profile_example(prof, name)
                V[name] = refuted(dict(cert, example=ex), w, rule="iso-flip-profile", **growth)
    elif sup is not None:
        if identity_like:
            for name in ("Aut1", "Aut2", "Aut3"):
                V[name] = settled("finitary", window=w, **growth)
        else:
            v0 = sup[0]
            V["Aut1"] = refuted({"moved": v0, "changes_at": changes_at(g, v0, w)}, w, rule="finitary", **growth)
            V["Aut2"] = refuted({"moved": v0, "changes_at": changes_at(g, v0, w)}, w, rule="finitary", **growth)
            V["Aut3"] = settled("finitary", cert={"support": sup}, window=w, **growth)
    else:
        if identity_like:
            for name in ("Aut1", "Aut2", "Aut3"):
                V[name] = supported(w, note=note, **growth)
        else:
            V["Aut1"] = (evidence_against if _increasing_tail(total) else supported)(w, note=note, **growth)
            V["Aut2"] = (evidence_against if _increasing_tail(per_vertex) else supported)(w, note=note, **growth)
            growing = _vertices_with_growth(g, w)
            V["Aut3"] = (evidence_against if len(growing) >= 3 else supported)(
                w, note=note, growing_vertices=growing[:16], **growth)

    # reducts
    caps = {3: 40, 4: 24, 5: 18}
    par = {k: parity_preservation(g, min(w, caps[k]), k) for k in (3, 4, 5)}
    switching = prof is not None and _only_switches(g.target)
    dual = prof is not None and _is_dual(g.target)
    if par[3].refuted:
        V["S"] = par[3]
    elif switching or (prof is not None and V["Aut"].kind is Kind.SETTLED):
        V["S"] = settled("switching-iso", cert={"target": str(g.target)}, window=w)
    else:
        V["S"] = par[3]
    if par[4].refuted:
        V["D"] = par[4]
    elif dual:
        V["D"] = settled("iso-flip-profile", cert={"target": str(g.target)}, window=w)
    else:
        V["D"] = par[4]
    if par[5].refuted:
        V["B"] = par[5]
    elif V["S"].kind is Kind.SETTLED or V["D"].kind is Kind.SETTLED:
        V["B"] = settled("reduct-chain", window=w)
    else:
        V["B"] = par[5]

    # filter
    fc = filter_contradiction(g)
    if fc is not None:
        V["AutFilter"] = refuted(fc, w, rule="filter-contradiction", target=str(g.target))
    elif V["Aut2"].kind is Kind.SETTLED:
        V["AutFilter"] = settled("aut2-in-filter", window=w)
    elif sup is not None:
        V["AutFilter"] = settled("finitary", cert={"support": sup}, window=w)
    else:
        V["AutFilter"] = aut_filter_evidence(g, min(w, 64), k_max)

    # hypergraph groups
    if edges is None:
        edges = _default_edges(g, w)
    if sup is not None and not identity_like:
        V["AutH"] = _finitary_not_auth(g, sup, w, d)
    elif V["Aut2"].kind is Kind.SETTLED:
        V["AutH"] = settled("aut2-in-auth", window=w)
    elif V["D"].kind is Kind.SETTLED:
        V["AutH"] = settled("d-in-auth", window=w)
    else:
        V["AutH"] = _auth_window(g, edges, w, d)
    if V["Aut3"].kind is Kind.SETTLED:
        V["FAutH"] = settled("aut3-in-fauth" if sup is None else "finitary", window=w)
    else:
        V["FAutH"] = faut_evidence(g, edges, w, d, min(s_max, 4))[0]
    if V["FAutH"].kind is Kind.SETTLED:
        V["AutStarH"] = settled("fauth-in-autstar", window=w)
    elif V["S"].kind is Kind.SETTLED:
        V["AutStarH"] = settled("s-in-autstar", window=w)
    elif V["B"].kind is Kind.SETTLED:
        V["AutStarH"] = settled("b-in-autstar", window=w)
    else:
        res = [autstar_evidence(g, E, w, d, s_max)[0] for E in edges]
        bad = [r for r in res if r.negative]
        V["AutStarH"] = bad[0] if bad else (res[0] if res else supported(w, d))
    params = {"window": window, "window_effective": w, "depth": d, "k_max": k_max, "s_max": s_max,
              "table": g.name, "source": str(g.source), "target": str(g.target)}
    return MembershipReport({k: V[k] for k in sorted(V)}, params)


def _pat_json(p: dict) -> dict:
    return {str(k): v for k, v in sorted(p.items())}


def _profile_example(prof: dict, group: str) -> dict:
    gen = prof["generic"]
    pts = prof["points"]
    if prof["gg"]:
        i, j = prof["gg"][0]
        x = realize(gen[i], pts)
        y = realize(gen[j], pts, x + 1 if isinstance(x, int) else 0)
        return {"kind": "generic-generic", "patterns": [_pat_json(gen[i]), _pat_json(gen[j])], "vertices": [x, y]}
    if prof["gp"]:
        i, p = prof["gp"][0]
        return {"kind": "generic-point", "pattern": _pat_json(gen[i]), "point": p, "vertex": realize(gen[i], pts)}
    return {"kind": "none"}


def _vertices_with_growth(g, w) -> list:
    out = []
    half = max(4, w // 2)
    quarter = max(4, w // 4)
    for v in range(min(w, 32)):
        if not in_universe(g.source, v):
            continue
        a = len(changes_at(g, v, quarter))
        b = len(changes_at(g, v, half))
        c = len(changes_at(g, v, w))
        if c > b > a:
            out.append(v)
    return out


def _only_switches(view: ViewSpec) -> bool:
    v = view
    while type(v) is not Base:
        if type(v) is FlipWithin:
            return False
        v = v.view
    return True


def _is_dual(view: ViewSpec) -> bool:
    v = view
    while type(v) is not Base:
        t = type(v)
        if t is Switch or (t is FlipWithin and type(v.set) is not All):
            return False
        v = v.view
    return True


def _default_edges(g, w):
    return [Nbhd(v) for v in (0, 1)]


def _finitary_not_auth(g, sup, w, d) -> Verdict:
    # if g sends some u ∈ N(v) to v, then v lies in N(v)g and is typically
    # adjacent to everything else there
    for v in sup:
        u = g.inverse(v)
        if u != v and adjacent(u, v):
            E = Nbhd(v)
            ver = copy_evidence(Base(), image_set(g, E), w, 1)
            if ver.refuted:
                return refuted({"edge": str(E), "image": str(image_set(g, E)), "pair": ver.certificate},
                               w, d, rule="finitary")
    return evidence_against(w, d, note="no image of a neighbourhood was refuted on the window")


def _auth_window(g, edges, w, d) -> Verdict:
    for E in edges:
        for inv in (False, True):
            v = _image_copy(g, E, (), w, d, inv)
            if v.refuted:
                return refuted({"edge": str(E), "direction": "g^-1" if inv else "g", "verdict": v}, w, d, rule=v.rule)
            if v.negative:
                return evidence_against(w, d, cert={"edge": str(E)})
    return supported(w, d, edges=[str(E) for E in edges])
