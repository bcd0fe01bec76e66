"""BIT presentation of the Rado graph, witnesses, and verdict plumbing."""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass, field
from math import isqrt
from typing import Any, Iterable

from .nat import Nat, Tower, bits, canon, from_bits, has_bit, render_short as render, succ


class RadoError(Exception):
    """Base class for all library errors."""


class ResourceExhausted(RadoError):
    pass


class OutOfUniverse(RadoError):
    pass


class BadArity(RadoError):
    pass


class NoWitnessWithinBound(RadoError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SeedInconsistent(RadoError):
    pass


class EmptyEdgeFamily(RadoError):
    pass


class PreconditionViolated(RadoError):
    pass


class ParseError(RadoError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def adjacent(u: Nat, v: Nat) -> bool:
    """BIT adjacency: the smaller vertex indexes a one-bit of the larger."""
    if type(u) is int and type(v) is int:
        if u == v:
            return False
        if u > v:
            u, v = v, u
        return (v >> u) & 1 == 1
    if u == v:
        return False
    if u > v:
        u, v = v, u
    return has_bit(v, u)


def _key(x: Nat):
    return x


@dataclass(frozen=True)
class FinitePairUV:
    """A pair of disjoint finite vertex sets, each kept sorted."""

    U: tuple = ()
    V: tuple = ()

    def __post_init__(self):
        u = tuple(sorted(set(self.U)))
        v = tuple(sorted(set(self.V)))
        if set(u) & set(v):
            raise ValueError(f"U and V must be disjoint, both contain {sorted(set(u) & set(v))}")
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "V", v)

    @property
    def support(self) -> tuple:
        return tuple(sorted(set(self.U) | set(self.V)))

    def __len__(self) -> int:
        return len(self.U) + len(self.V)

    def swapped(self) -> "FinitePairUV":
        return FinitePairUV(self.V, self.U)

    def render(self) -> str:
        return "(" + ",".join(render(x) for x in self.U) + ";" + ",".join(render(x) for x in self.V) + ")"

    def to_json(self) -> dict:
        return {"U": [jsonable(x) for x in self.U], "V": [jsonable(x) for x in self.V]}


def pair(U: Iterable[Nat] = (), V: Iterable[Nat] = ()) -> FinitePairUV:
    return FinitePairUV(tuple(U), tuple(V))


def is_witness(z: Nat, p: FinitePairUV) -> bool:
    if z in p.U or z in p.V:
        return False
    return all(adjacent(z, u) for u in p.U) and not any(adjacent(z, v) for v in p.V)


def witness_direct(p: FinitePairUV) -> Nat:
    """Closed-form witness: one-bits on U plus a fresh bit above everything."""
    sup = p.support
    m = succ(sup[-1]) if sup else 0
    return from_bits(list(p.U) + [m])


def enumerate_pair(n: int) -> FinitePairUV:
    """n-th pair of the enumeration in which every pair recurs infinitely often.

    n is unpaired by the Cantor diagonal into (r, m); r only produces the
    repetitions, m is read in base 3 (digit 1 puts i in U, digit 2 in V).
    """
    if n < 0:
        raise ValueError("index must be non-negative")
    w = (isqrt(8 * n + 1) - 1) // 2
    m = n - w * (w + 1) // 2
    U, V = [], []
    i = 0
    while m:
        m, digit = divmod(m, 3)
        if digit == 1:
            U.append(i)
        elif digit == 2:
            V.append(i)
        i += 1
    return FinitePairUV(tuple(U), tuple(V))


def pair_code(p: FinitePairUV) -> int:
    """The base-3 code m of a pair of small vertices."""
    m = 0
    for u in p.U:
        m += 3**u
    for v in p.V:
        m += 2 * 3**v
    return m


def pair_index(p: FinitePairUV, r: int = 0) -> int:
    """An index n with enumerate_pair(n) == p; r selects the repetition."""
    m = pair_code(p)
    w = r + m
    return w * (w + 1) // 2 + m


# -- verdicts -----------------------------------------------------------------


class Kind(str, enum.Enum):
    REFUTED = "Refuted"
    SUPPORTED = "SupportedUpTo"
    SETTLED = "ExactlySettled"


@dataclass
class Verdict:
    """Outcome of checking one claim.

    ``against`` marks window evidence that points the other way without
    certifying anything (a claim that looks false on the window but has no
    finite refutation).  It only accompanies SupportedUpTo.
    """

    kind: Kind
    certificate: Any = None
    window: int = 0
    depth: int = 0
    rule: str | None = None
    note: str | None = None
    stats: dict = field(default_factory=dict)
    against: bool = False

    @property
    def refuted(self) -> bool:
        return self.kind is Kind.REFUTED

    @property
    def positive(self) -> bool:
        return self.kind is not Kind.REFUTED and not self.against

    @property
    def negative(self) -> bool:
        return self.kind is Kind.REFUTED or self.against

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "window": self.window,
            "depth": self.depth,
            "rule": self.rule,
            "certificate": jsonable(self.certificate),
            "note": self.note,
            "stats": jsonable(self.stats),
            "against": self.against,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Verdict":
        return cls(
            kind=Kind(d["kind"]),
            certificate=d.get("certificate"),
            window=d.get("window", 0),
            depth=d.get("depth", 0),
            rule=d.get("rule"),
            note=d.get("note"),
            stats=d.get("stats") or {},
            against=bool(d.get("against", False)),
        )


def refuted(cert, window=0, depth=0, rule=None, note=None, **stats) -> Verdict:
    if cert is None:
        raise ValueError("a refutation needs a certificate")
    return Verdict(Kind.REFUTED, cert, window, depth, rule, note, stats)


def supported(window=0, depth=0, note=None, cert=None, **stats) -> Verdict:
    return Verdict(Kind.SUPPORTED, cert, window, depth, None, note, stats)


def evidence_against(window=0, depth=0, note=None, cert=None, **stats) -> Verdict:
    return Verdict(Kind.SUPPORTED, cert, window, depth, None, note, stats, against=True)


def settled(rule: str, cert=None, window=0, depth=0, note=None, **stats) -> Verdict:
    return Verdict(Kind.SETTLED, cert, window, depth, rule, note, stats)


def jsonable(x):
    if isinstance(x, Tower):
        return render(x)
    if isinstance(x, FinitePairUV):
        return x.to_json()
    if isinstance(x, Verdict):
        return x.to_json()
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


# -- exact least witnesses in Base ----------------------------------------------


def least_geq(s: Nat, ones: frozenset, zeros: frozenset) -> Nat:
    """Least z >= s whose bits are 1 on ``ones`` and 0 on ``zeros``.

    If s fails, the answer agrees with s above some position k where s has a
    0 and the answer a 1; below k only the forced ones remain.  The lowest
    admissible k gives the least answer.
    """
    S = set(bits(s))
    if ones <= S and not (zeros & S):
        return s
    k0: Nat = 0
    for r in ones:
        if r not in S and r > k0:
            k0 = r
    for q in zeros:
        if q in S:
            q1 = succ(q)
            if q1 > k0:
                k0 = q1
    k = k0
    while k in S or k in zeros:
        k = succ(k)
    return from_bits([x for x in S if x > k] + [k] + [r for r in ones if r < k])


def least_geq_int(s: int, ones: int, zeros: int) -> int:
    """Integer-mask version of core.least_geq."""
    if s & ones == ones and not s & zeros:
        return s
    miss = ones & ~s
    clash = zeros & s
    k = max(miss.bit_length() - 1 if miss else 0, clash.bit_length())
    while (s >> k) & 1 or (zeros >> k) & 1:
        k += 1
    return ((s >> (k + 1)) << (k + 1)) | (1 << k) | (ones & ((1 << k) - 1))


def _least_base_int(Us: frozenset, Vs: frozenset, lo: int, exclude) -> int:
    """least_base for plain integer constraints, with bit masks."""
    P = sorted(Us | Vs)
    lmask = 0
    lones = 0
    for i in range(len(P) + 1):
        if i > 0:
            prev = P[i - 1]
            lmask |= 1 << prev
            if prev in Us:
                lones |= 1 << prev
            start = max(prev + 1, lo)
        else:
            start = lo
        if i < len(P):
            hi = P[i]
            if start >= hi:
                continue
            cand = ((1 << hi) - 1) >> start << start
            for q in P[i:]:
                cand = cand & q if q in Us else cand & ~q
            while cand:
                z = (cand & -cand).bit_length() - 1
                if z & lmask == lones and z not in exclude:
                    return z
                cand &= cand - 1
            continue
        z = least_geq_int(start, lones, lmask & ~lones)
        while z in exclude:
            z = least_geq_int(z + 1, lones, lmask & ~lones)
        return z
    raise AssertionError("unreachable: the last gap always has a witness")


def least_base(U: Iterable[Nat], V: Iterable[Nat], lo: Nat = 0, exclude=frozenset()) -> Nat:
    """Least Base witness z >= lo for (U, V) outside ``exclude``.

    Walks the gaps between the sorted constraint vertices.  Inside a gap a
    candidate z must carry prescribed bits at the constraints below it, and
    the constraints above it must carry (or lack) bit z.  When some
    constraint above must be adjacent, z is one of its bit positions;
    otherwise z is the least pattern match avoiding finitely many positions.
    """
    Us = frozenset(U)
    Vs = frozenset(V)
    if Us & Vs:
        raise ValueError("U and V must be disjoint")
    if type(lo) is int and all(type(x) is int and x < 4096 for x in Us) and \
            all(type(x) is int and x < 4096 for x in Vs):
        return canon(_least_base_int(Us, Vs, lo, exclude))
    P = sorted(Us | Vs)
    n = len(P)
    bitlists = {}

    def bl(p):
        b = bitlists.get(p)
        if b is None:
            b = bitlists[p] = bits(p)
        return b

    # best_one[i]: the adjacency constraint in P[i:] with the fewest bits
    best_one: list = [None] * (n + 1)
    for i in range(n - 1, -1, -1):
        cur = best_one[i + 1]
        p = P[i]
        if p in Us and (cur is None or len(bl(p)) < len(bl(cur))):
            cur = p
        best_one[i] = cur

    def valid(z, i) -> bool:
        if z in exclude:
            return False
        for j in range(i):
            if has_bit(z, P[j]) != (P[j] in Us):
                return False
        for j in range(i, n):
            if has_bit(P[j], z) != (P[j] in Us):
                return False
        return True

    ones_below: set = set()
    zeros_below: set = set()
    for i in range(n + 1):
        if i > 0:
            prev = P[i - 1]
            (ones_below if prev in Us else zeros_below).add(prev)
            start = succ(prev)
            if lo > start:
                start = lo
        else:
            start = lo
        hi = P[i] if i < n else None
        if hi is not None and start >= hi:
            continue
        pstar = best_one[i]
        if pstar is not None:
            cands = bl(pstar)
            j = bisect.bisect_left(cands, start)
            while j < len(cands):
                z = cands[j]
                if hi is not None and z >= hi:
                    break
                if valid(z, i):
                    return z
                j += 1
            continue
        ob = frozenset(ones_below)
        zb = frozenset(zeros_below)
        above = P[i:]
        z = start
        while True:
            z = least_geq(z, ob, zb)
            if hi is not None and z >= hi:
                break
            if z in exclude or any(has_bit(q, z) for q in above):
                z = succ(z)
                continue
            return z
    raise AssertionError("unreachable: the last gap always has a witness")
