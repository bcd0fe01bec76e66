"""Decidable vertex sets and graph views derived from Base."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import BadArity, OutOfUniverse, adjacent
from .nat import Nat
from .streams import get_stream


class SetSpec:
    """Base class of vertex-set specifications."""

    def __add__(self, other):
        return Union(self, other)

    def __and__(self, other):
        return Inter(self, other)

    def __sub__(self, other):
        return Diff(self, other)

    def __xor__(self, other):
        return SymDiff(self, other)

    def __str__(self):
        from .syntax import render_set
        return render_set(self)

    def to_json(self) -> str:
        return str(self)


@dataclass(frozen=True, eq=True)
class Finite(SetSpec):
    elems: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elems", tuple(sorted(set(self.elems))))


@dataclass(frozen=True)
class Nbhd(SetSpec):
    v: Nat


@dataclass(frozen=True)
class NonNbhdStrict(SetSpec):
    v: Nat


@dataclass(frozen=True)
class All(SetSpec):
    pass


@dataclass(frozen=True)
class WitnessSet(SetSpec):
    U: tuple = ()
    V: tuple = ()

    def __post_init__(self):
        u, v = tuple(sorted(set(self.U))), tuple(sorted(set(self.V)))
        if set(u) & set(v):
            raise ValueError("witness set needs disjoint U and V")
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "V", v)


@dataclass(frozen=True)
class Union(SetSpec):
    a: SetSpec
    b: SetSpec


@dataclass(frozen=True)
class Inter(SetSpec):
    a: SetSpec
    b: SetSpec


@dataclass(frozen=True)
class Diff(SetSpec):
    a: SetSpec
    b: SetSpec


@dataclass(frozen=True)
class SymDiff(SetSpec):
    a: SetSpec
    b: SetSpec


@dataclass(frozen=True)
class Stream(SetSpec):
    name: str


Intersection = Inter
Difference = Diff
NCS = NonNbhdStrict


class ViewSpec:
    def __str__(self):
        from .syntax import render_view
        return render_view(self)

    def to_json(self) -> str:
        return str(self)


@dataclass(frozen=True)
class Base(ViewSpec):
    pass


@dataclass(frozen=True)
class Switch(ViewSpec):
    view: ViewSpec
    set: SetSpec


@dataclass(frozen=True)
class FlipWithin(ViewSpec):
    view: ViewSpec
    set: SetSpec


@dataclass(frozen=True)
class Delete(ViewSpec):
    view: ViewSpec
    elems: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elems", tuple(sorted(set(self.elems))))


@dataclass(frozen=True)
class Restrict(ViewSpec):
    view: ViewSpec
    set: SetSpec


BASE = Base()


# -- membership and adjacency ---------------------------------------------------


def set_member(s: SetSpec, x: Nat) -> bool:
    t = type(s)
    if t is Finite:
        return x in s.elems
    if t is Nbhd:
        return adjacent(s.v, x)
    if t is NonNbhdStrict:
        return x != s.v and not adjacent(s.v, x)
    if t is All:
        return True
    if t is WitnessSet:
        if x in s.U or x in s.V:
            return False
        return all(adjacent(x, u) for u in s.U) and not any(adjacent(x, v) for v in s.V)
    if t is Union:
        return set_member(s.a, x) or set_member(s.b, x)
    if t is Inter:
        return set_member(s.a, x) and set_member(s.b, x)
    if t is Diff:
        return set_member(s.a, x) and not set_member(s.b, x)
    if t is SymDiff:
        return set_member(s.a, x) != set_member(s.b, x)
    if t is Stream:
        return get_stream(s.name).contains(x)
    raise TypeError(f"not a vertex set spec: {s!r}")


def in_universe(view: ViewSpec, x: Nat) -> bool:
    t = type(view)
    if t is Base:
        return True
    if t is Switch or t is FlipWithin:
        return in_universe(view.view, x)
    if t is Delete:
        return x not in view.elems and in_universe(view.view, x)
    if t is Restrict:
        return set_member(view.set, x) and in_universe(view.view, x)
    raise TypeError(f"not a view spec: {view!r}")


def _adj(view: ViewSpec, u: Nat, v: Nat) -> bool:
    t = type(view)
    if t is Base:
        return adjacent(u, v)
    if t is Switch:
        a = _adj(view.view, u, v)
        return a != (set_member(view.set, u) != set_member(view.set, v))
    if t is FlipWithin:
        a = _adj(view.view, u, v)
        return a != (set_member(view.set, u) and set_member(view.set, v))
    return _adj(view.view, u, v)


def eval_adjacent(view: ViewSpec, u: Nat, v: Nat) -> bool:
    """Adjacency of u and v in the view; both must lie in its universe."""
    if not in_universe(view, u):
        raise OutOfUniverse(f"{u} is not a vertex of {view}")
    if not in_universe(view, v):
        raise OutOfUniverse(f"{v} is not a vertex of {view}")
    if u == v:
        return False
    return _adj(view, u, v)


def adjacency_fn(view: ViewSpec):
    """Fast adjacency callable for vertices already known to be in the universe."""
    if type(view) is Base:
        return adjacent
    return lambda u, v: u != v and _adj(view, u, v)


def universe_in_window(view: ViewSpec, window: int) -> list[int]:
    return [x for x in range(window) if in_universe(view, x)]


# -- normal forms ---------------------------------------------------------------


def _simplify_set(s: SetSpec) -> SetSpec:
    t = type(s)
    if t in (Union, Inter, Diff, SymDiff):
        a, b = _simplify_set(s.a), _simplify_set(s.b)
        if type(a) is Finite and type(b) is Finite:
            x, y = set(a.elems), set(b.elems)
            r = {Union: x | y, Inter: x & y, Diff: x - y, SymDiff: x ^ y}[t]
            return Finite(tuple(r))
        if t is SymDiff:
            if a == b:
                return Finite(())
            if type(a) is Finite and not a.elems:
                return b
            if type(b) is Finite and not b.elems:
                return a
        return t(a, b)
    return s


def _empty(s: SetSpec) -> bool:
    return type(s) is Finite and not s.elems


def simplify(view: ViewSpec) -> ViewSpec:
    """Merge nested switches into one switch by the symmetric difference."""
    t = type(view)
    if t is Base:
        return view
    if t is Switch:
        inner = simplify(view.view)
        x = _simplify_set(view.set)
        if type(inner) is Switch:
            x = _simplify_set(SymDiff(inner.set, x))
            inner = inner.view
        if _empty(x) or type(x) is All:
            return inner
        return Switch(inner, x)
    if t is FlipWithin:
        x = _simplify_set(view.set)
        inner = simplify(view.view)
        if _empty(x):
            return inner
        return FlipWithin(inner, x)
    if t is Delete:
        inner = simplify(view.view)
        if not view.elems:
            return inner
        return Delete(inner, view.elems)
    if t is Restrict:
        return Restrict(simplify(view.view), _simplify_set(view.set))
    raise TypeError(f"not a view spec: {view!r}")


# -- parity hypergraphs ----------------------------------------------------------


def edge_count(view: ViewSpec, S) -> int:
    S = list(S)
    adj = adjacency_fn(view)
    return sum(1 for a, b in combinations(S, 2) if adj(a, b))


def odd_parity(view: ViewSpec, S) -> bool:
    """True when S spans an odd number of edges (|S| in 3..5)."""
    S = list(dict.fromkeys(S))
    if len(S) not in (3, 4, 5):
        raise BadArity(f"parity hyperedges have 3, 4 or 5 vertices, got {len(S)}")
    for x in S:
        if not in_universe(view, x):
            raise OutOfUniverse(f"{x} is not a vertex of {view}")
    return edge_count(view, S) % 2 == 1


# -- structure used by the exact witness search ---------------------------------


def set_atoms(s: SetSpec, anchors: set, points: set, streams: set) -> None:
    t = type(s)
    if t is Finite:
        points.update(s.elems)
    elif t is Nbhd or t is NonNbhdStrict:
        anchors.add(s.v)
        points.add(s.v)
    elif t is WitnessSet:
        anchors.update(s.U)
        anchors.update(s.V)
        points.update(s.U)
        points.update(s.V)
    elif t in (Union, Inter, Diff, SymDiff):
        set_atoms(s.a, anchors, points, streams)
        set_atoms(s.b, anchors, points, streams)
    elif t is Stream:
        streams.add(s.name)


def view_atoms(view: ViewSpec) -> tuple[frozenset, frozenset, frozenset]:
    """(anchors, points, stream names) occurring in the view."""
    anchors: set = set()
    points: set = set()
    streams: set = set()
    v = view
    while type(v) is not Base:
        if type(v) is Delete:
            points.update(v.elems)
        else:
            set_atoms(v.set, anchors, points, streams)
        v = v.view
    return frozenset(anchors), frozenset(points), frozenset(streams)


def set_member_generic(s: SetSpec, adj_to: dict) -> bool:
    """Membership of a vertex that is neither a point nor a stream element,
    given only its adjacency to the anchors."""
    t = type(s)
    if t is Finite or t is Stream:
        return False
    if t is Nbhd:
        return adj_to[s.v]
    if t is NonNbhdStrict:
        return not adj_to[s.v]
    if t is All:
        return True
    if t is WitnessSet:
        return all(adj_to[u] for u in s.U) and not any(adj_to[v] for v in s.V)
    if t is Union:
        return set_member_generic(s.a, adj_to) or set_member_generic(s.b, adj_to)
    if t is Inter:
        return set_member_generic(s.a, adj_to) and set_member_generic(s.b, adj_to)
    if t is Diff:
        return set_member_generic(s.a, adj_to) and not set_member_generic(s.b, adj_to)
    if t is SymDiff:
        return set_member_generic(s.a, adj_to) != set_member_generic(s.b, adj_to)
    raise TypeError(f"not a vertex set spec: {s!r}")


def universe_generic(view: ViewSpec, adj_to: dict) -> bool:
    v = view
    while type(v) is not Base:
        if type(v) is Restrict and not set_member_generic(v.set, adj_to):
            return False
        v = v.view
    return True


def flip_generic(view: ViewSpec, adj_to: dict, u: Nat) -> bool:
    """Whether the view flips the Base adjacency between a generic vertex
    (described by ``adj_to``) and the concrete vertex u."""
    flip = False
    v = view
    while type(v) is not Base:
        t = type(v)
        if t is Switch:
            flip ^= set_member_generic(v.set, adj_to) != set_member(v.set, u)
        elif t is FlipWithin:
            flip ^= set_member_generic(v.set, adj_to) and set_member(v.set, u)
        v = v.view
    return flip
