"""Exact reasoning about stream-free views through anchor patterns.

Fix the finitely many anchors of a view.  A vertex that is neither a point
of the view nor one of the anchors is described, as far as every set and
switch of the view is concerned, by its adjacency pattern to the anchors.
In the Rado graph each pattern is carried by infinitely many vertices, so a
statement about all vertices reduces to a statement about finitely many
patterns plus finitely many points.
"""
from __future__ import annotations

from itertools import product

from .core import adjacent, least_base
from .nat import Nat
from .views import (Base, Delete, FlipWithin, SetSpec, Switch, ViewSpec, _adj, flip_generic,
                    in_universe, set_atoms, set_member, set_member_generic, universe_generic, view_atoms)


def stream_free(x) -> bool:
    """True when no stream occurs in the view or set."""
    if isinstance(x, ViewSpec):
        return not view_atoms(x)[2]
    anchors: set = set()
    streams: set = set()
    set_atoms(x, anchors, set(), streams)
    return not streams


def atoms(*things) -> tuple[list, list]:
    """Sorted anchors and points of several views/sets together."""
    anchors: set = set()
    points: set = set()
    streams: set = set()
    for t in things:
        if isinstance(t, ViewSpec):
            a, p, s = view_atoms(t)
            anchors |= a
            points |= p
            streams |= s
        elif isinstance(t, SetSpec):
            set_atoms(t, anchors, points, streams)
        else:
            anchors.update(t)
            points.update(t)
    return sorted(anchors), sorted(points)


def patterns(anchors, fixed: dict | None = None):
    """Every adjacency pattern over ``anchors`` agreeing with ``fixed``."""
    fixed = fixed or {}
    free = [a for a in anchors if a not in fixed]
    for bits in product((False, True), repeat=len(free)):
        pat = dict(fixed)
        pat.update(zip(free, bits))
        yield pat


def realize(pat: dict, points=(), lo: Nat = 0) -> Nat:
    """Least vertex >= lo carrying the pattern that is not a point."""
    U = [a for a, b in pat.items() if b]
    V = [a for a, b in pat.items() if not b]
    return least_base(U, V, lo, frozenset(points))


def flip_pp(view: ViewSpec, x: Nat, y: Nat) -> bool:
    """Whether the view changes the Base adjacency of two concrete vertices."""
    return x != y and _adj(view, x, y) != adjacent(x, y)


def flip_gg(view: ViewSpec, pa: dict, pb: dict) -> bool:
    """Whether the view changes the adjacency between two generic vertices."""
    flip = False
    v = view
    while type(v) is not Base:
        t = type(v)
        if t is Switch:
            flip ^= set_member_generic(v.set, pa) != set_member_generic(v.set, pb)
        elif t is FlipWithin:
            flip ^= set_member_generic(v.set, pa) and set_member_generic(v.set, pb)
        v = v.view
    return flip


def flip_free(view: ViewSpec) -> bool:
    """No Switch or FlipWithin layer: adjacency is Base adjacency."""
    v = view
    while type(v) is not Base:
        if type(v) in (Switch, FlipWithin):
            return False
        v = v.view
    return True


def cofinite_universe(view: ViewSpec) -> bool:
    v = view
    while type(v) is not Base:
        if type(v) not in (Switch, FlipWithin, Delete):
            return False
        v = v.view
    return True


def flip_profile(view: ViewSpec) -> dict:
    """How a stream-free view with cofinite universe departs from Base.

    Returns the generic patterns and points of the universe together with
    the flip relations among them.  ``inf_generic`` lists patterns whose
    vertices have infinitely many changed adjacencies, ``inf_points`` the
    points with that property.
    """
    anchors, points = atoms(view)
    gen = [p for p in patterns(anchors) if universe_generic(view, p)]
    pts = [x for x in points if in_universe(view, x)]
    gg = [(i, j) for i, a in enumerate(gen) for j, b in enumerate(gen) if j >= i and flip_gg(view, a, b)]
    gp = [(i, x) for i, a in enumerate(gen) for x in pts if flip_generic(view, a, x)]
    pp = [(x, y) for k, x in enumerate(pts) for y in pts[k + 1:] if flip_pp(view, x, y)]
    inf_generic = sorted({i for i, j in gg} | {j for i, j in gg})
    inf_points = sorted({x for _, x in gp})
    return {"anchors": anchors, "points": pts, "generic": gen, "gg": gg, "gp": gp, "pp": pp,
            "inf_generic": inf_generic, "inf_points": inf_points}


def neighbour_classes(view: ViewSpec, S: SetSpec, x: Nat):
    """A concrete vertex of S, adjacent to x in the view, or None if none exists.

    Exact for stream-free view and S.
    """
    anchors, points = atoms(view, S, [x])
    for y in points:
        if y != x and in_universe(view, y) and set_member(S, y) and _adj(view, x, y):
            return y
    for pat in patterns(anchors):
        if not universe_generic(view, pat) or not set_member_generic(S, pat):
            continue
        if pat[x] != flip_generic(view, pat, x):
            return realize(pat, points)
    return None


def common_neighbours_empty(view: ViewSpec, xs) -> Nat | None:
    """A vertex adjacent to every x in xs both in Base and in the view, or
    None when no such vertex exists (exact, stream-free view)."""
    xs = list(xs)
    anchors, points = atoms(view, xs)
    for z in points:
        if z in xs or not in_universe(view, z):
            continue
        if all(adjacent(z, x) and _adj(view, z, x) for x in xs):
            return z
    for pat in patterns(anchors, {x: True for x in xs}):
        if not universe_generic(view, pat):
            continue
        if not any(flip_generic(view, pat, x) for x in xs):
            return realize(pat, points)
    return None
