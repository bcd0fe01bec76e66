"""Natural numbers that may be far too large for a flat binary expansion.

Vertices are plain ``int`` while they fit below ``2**LIMIT``.  Anything larger
is a :class:`Tower`: the frozenset of positions of its one-bits, where each
position is again a natural in canonical form.  A tower of exponentials of
height 30 is a handful of nested sets this way, and the BIT adjacency test
becomes a set-membership query.

Every value handed out by this module is canonical, so ``==`` and ``hash``
agree with numeric equality.
"""
from __future__ import annotations

import hashlib
import re
from typing import Iterable, Union

LIMIT = 1024


_INTERN: dict = {}


class Tower:
    """A natural >= 2**LIMIT, stored by the set of its one-bit positions.

    Instances are interned: equal values are the same object, so equality is
    identity.  Structural comparison would revisit shared sub-towers
    exponentially often.
    """

    __slots__ = ("bits", "_desc", "_hash")

    def __new__(cls, bits: frozenset):
        t = _INTERN.get(bits)
        if t is None:
            t = object.__new__(cls)
            t.bits = bits
            t._desc = tuple(sorted(bits, reverse=True))
            t._hash = hash(("tower", bits))
            _INTERN[bits] = t
        return t

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __ne__(self, other) -> bool:
        return self is not other

    def __reduce__(self):
        return (Tower, (self.bits,))

    def _cmp(self, other) -> int:
        if isinstance(other, int):
            if other.bit_length() <= LIMIT:
                return 1
            other = from_bits(int_bits(other))
        if not isinstance(other, Tower):
            return NotImplemented
        if self is other:
            return 0
        for a, b in zip(self._desc, other._desc):
            if a is not b and a != b:
                return 1 if a > b else -1
        return (len(self._desc) > len(other._desc)) - (len(self._desc) < len(other._desc))

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __repr__(self) -> str:
        return f"Tower({render(self)})"

    def __str__(self) -> str:
        return render(self)

    def height(self) -> int:
        """Nesting depth of the representation (1 for int positions only)."""
        h = _HEIGHT.get(self)
        if h is None:
            h = 1 + max(p.height() if isinstance(p, Tower) else 0 for p in self.bits)
            _HEIGHT[self] = h
        return h


_HEIGHT: dict = {}


Nat = Union[int, Tower]


def is_nat(x) -> bool:
    return (isinstance(x, int) and not isinstance(x, bool) and x >= 0) or isinstance(x, Tower)


def canon(x: Nat) -> Nat:
    """Return the canonical form of ``x`` (large ints become towers)."""
    if isinstance(x, int) and x.bit_length() > LIMIT:
        return from_bits(int_bits(x))
    return x


def int_bits(x: int) -> list[int]:
    out = []
    i = 0
    while x:
        low = (x & -x).bit_length() - 1
        i += low
        out.append(i)
        x >>= low + 1
        i += 1
    return out


def bits(x: Nat) -> list:
    """Positions of the one-bits of ``x`` in increasing order."""
    if isinstance(x, int):
        return int_bits(x)
    return list(reversed(x._desc))


def from_bits(positions: Iterable[Nat]) -> Nat:
    """The natural whose one-bits sit exactly at ``positions``."""
    ps = frozenset(positions)
    small = True
    for p in ps:
        if not isinstance(p, int) or p >= LIMIT:
            small = False
            break
    if small:
        v = 0
        for p in ps:
            v |= 1 << p
        return v
    return Tower(ps)


def has_bit(x: Nat, p: Nat) -> bool:
    if isinstance(x, int):
        return isinstance(p, int) and (x >> p) & 1 == 1
    return p in x.bits


def succ(x: Nat) -> Nat:
    if isinstance(x, int):
        y = x + 1
        if y.bit_length() > LIMIT:
            return Tower(frozenset([LIMIT]))
        return y
    k = 0
    bs = x.bits
    while k in bs:
        k += 1
    return from_bits((bs - frozenset(range(k))) | {k})


def pred(x: Nat) -> Nat:
    if isinstance(x, int):
        if x <= 0:
            raise ValueError("pred(0)")
        return x - 1
    low = min(x.bits)  # always int or tower; lowest bit is cleared, below it all ones
    if not isinstance(low, int):
        raise OverflowError("pred of a tower with a tower-sized lowest bit")
    return from_bits((x.bits - {low}) | frozenset(range(low)))


def bit_length(x: Nat) -> Nat:
    if isinstance(x, int):
        return x.bit_length()
    return succ(x._desc[0])


def pow2(p: Nat) -> Nat:
    return from_bits([p])


def render(x: Nat) -> str:
    """Decimal for ints, ``2^a+2^b+...`` (descending, nested in parens) for towers."""
    if isinstance(x, int):
        return str(x)
    parts = []
    for p in x._desc:
        if isinstance(p, int):
            parts.append(f"2^{p}")
        else:
            parts.append(f"2^({render(p)})")
    return "+".join(parts)


_SIZE: dict = {}
_DIGEST: dict = {}


def rendered_size(x: Nat) -> int:
    """Length of ``render(x)`` without building the string."""
    if isinstance(x, int):
        return len(str(x))
    n = _SIZE.get(x)
    if n is None:
        n = len(x.bits) - 1
        for p in x.bits:
            n += 2 + (rendered_size(p) if isinstance(p, int) else rendered_size(p) + 2)
        _SIZE[x] = n
    return n


def digest(x: Nat) -> str:
    """Stable structural fingerprint (hex), computed over the shared form."""
    if isinstance(x, int):
        return hashlib.sha1(str(x).encode()).hexdigest()
    h = _DIGEST.get(x)
    if h is None:
        parts = ",".join(digest(p) for p in x._desc)
        h = hashlib.sha1(("T[" + parts + "]").encode()).hexdigest()
        _DIGEST[x] = h
    return h


def render_short(x: Nat, limit: int = 120) -> str:
    """``render(x)`` when short enough, else a descriptive stand-in."""
    if isinstance(x, int) or rendered_size(x) <= limit:
        return render(x)
    return f"<tower height={x.height()} bits={len(x.bits)} id={digest(x)[:12]}>"


class Shared:
    """Renders many naturals with common sub-towers named once.

    Towers whose full literal would exceed ``limit`` characters are bound to
    names ``t0, t1, ...`` (in first-use order); ``defs`` lists the bindings
    so that each refers only to earlier names.
    """

    def __init__(self, limit: int = 120):
        self.limit = limit
        self.names: dict = {}
        self.defs: list[tuple[str, str]] = []

    def _body(self, x: Tower) -> str:
        parts = []
        for p in x._desc:
            if isinstance(p, int):
                parts.append(f"2^{p}")
            else:
                parts.append(f"2^({self.render(p)})")
        return "+".join(parts)

    def render(self, x: Nat) -> str:
        if isinstance(x, int) or rendered_size(x) <= self.limit:
            return render(x)
        name = self.names.get(x)
        if name is None:
            body = self._body(x)
            name = f"t{len(self.names)}"
            self.names[x] = name
            self.defs.append((name, body))
        return name


_TOKEN = re.compile(r"\s*(\d+|t\d+|\^|\+|\(|\))")


def parse(text: str, env: dict | None = None) -> Nat:
    """Inverse of :func:`render`; also accepts any decimal literal.

    Names bound in ``env`` (as produced by :class:`Shared`) may stand for
    whole terms.
    """
    s = text.strip()
    if env and s in env:
        return env[s]
    if s.isdigit():
        return canon(int(s))
    toks = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"bad natural literal: {text!r}")
        toks.append(m.group(1))
        pos = m.end()
    val, i = _parse_sum(toks, 0, env or {})
    if i != len(toks):
        raise ValueError(f"trailing input in natural literal: {text!r}")
    return val


def _parse_sum(toks: list[str], i: int, env: dict) -> tuple[Nat, int]:
    positions = []
    plain = 0
    while True:
        if i < len(toks) and toks[i][0] == "t":
            if toks[i] not in env:
                raise ValueError(f"unbound name {toks[i]}")
            val = env[toks[i]]
            i += 1
            if positions or plain or (i < len(toks) and toks[i] == "+"):
                raise ValueError("a bound name must stand alone")
            return val, i
        if i < len(toks) and toks[i].isdigit() and (i + 1 >= len(toks) or toks[i + 1] != "^"):
            plain += int(toks[i])
            i += 1
        elif i + 1 < len(toks) and toks[i] == "2" and toks[i + 1] == "^":
            i += 2
            if i < len(toks) and toks[i] == "(":
                p, i = _parse_sum(toks, i + 1, env)
                if i >= len(toks) or toks[i] != ")":
                    raise ValueError("unbalanced parenthesis in natural literal")
                i += 1
            elif i < len(toks) and toks[i].isdigit():
                p = canon(int(toks[i]))
                i += 1
            else:
                raise ValueError("exponent expected")
            positions.append(p)
        else:
            raise ValueError("term expected in natural literal")
        if i < len(toks) and toks[i] == "+":
            i += 1
            continue
        break
    if len(set(positions)) != len(positions):
        raise ValueError("repeated power in natural literal")
    val = from_bits(positions)
    if plain:
        val = add_int(val, plain)
    return val, i


def add_int(x: Nat, k: int) -> Nat:
    """``x + k`` for a small non-negative int ``k``."""
    if isinstance(x, int):
        return canon(x + k)
    for _ in range(k):
        x = succ(x)
    return x
