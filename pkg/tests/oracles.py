"""Brute-force reference implementations on plain ints.

Nothing here imports the package: these are the independent sides of the
comparisons in the test suite.
"""
from itertools import combinations


def adj(u: int, v: int) -> bool:
    if u == v:
        return False
    lo, hi = min(u, v), max(u, v)
    return format(hi, "b")[::-1][lo:lo + 1] == "1"


def witness_scan(U, V, bound, universe=None, adjf=adj):
    for z in range(bound + 1):
        if z in U or z in V:
            continue
        if universe is not None and z not in universe:
            continue
        if all(adjf(z, u) for u in U) and not any(adjf(z, v) for v in V):
            return z
    return None


def switched(X):
    X = set(X)
    return lambda u, v: adj(u, v) != ((u in X) != (v in X))


def complemented(u, v):
    return u != v and not adj(u, v)


def edges_in(S, adjf=adj):
    return sum(1 for a, b in combinations(S, 2) if adjf(a, b))


def perm_from_cycles(cycles):
    p = {}
    for c in cycles:
        for i, x in enumerate(c):
            p[x] = c[(i + 1) % len(c)]
    return lambda x: p.get(x, x)


def changed(g, window):
    return {(a, b) for a in range(window) for b in range(a + 1, window) if adj(a, b) != adj(g(a), g(b))}


def pair_from_code(m):
    """Base-3 digits of m: 1 puts i in U, 2 puts i in V."""
    U, V, i = [], [], 0
    while m:
        m, d = divmod(m, 3)
        if d == 1:
            U.append(i)
        elif d == 2:
            V.append(i)
        i += 1
    return tuple(U), tuple(V)


def is_partial_iso(pairs, adj_src, adj_tgt):
    items = list(pairs)
    imgs = [b for _, b in items]
    if len(set(imgs)) != len(imgs):
        return False
    for (a, b), (c, d) in combinations(items, 2):
        if adj_src(a, c) != adj_tgt(b, d):
            return False
    return True


def greedy_independent(avoid, start, count):
    """First ``count`` vertices >= start, pairwise non-adjacent, not adjacent to anything in avoid."""
    out = []
    z = start
    while len(out) < count:
        if z not in avoid and not any(adj(z, a) for a in avoid) and not any(adj(z, y) for y in out):
            out.append(z)
        z += 1
    return out
