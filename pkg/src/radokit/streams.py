"""Monotone, memoized vertex streams addressed by name."""
from __future__ import annotations

import bisect
import os
import re
import threading
from typing import Callable, Iterator

from .core import RadoError, ResourceExhausted
from .nat import Nat

DEFAULT_BUDGET = 10**6


def step_budget() -> int:
    raw = os.environ.get("RADOKIT_BUDGET")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise RadoError(f"RADOKIT_BUDGET must be an integer, got {raw!r}")
    return DEFAULT_BUDGET


class Stream:
    """Strictly increasing sequence produced on demand and cached.

    ``factory(stream)`` must return an iterator of strictly increasing
    naturals.  Work done between two elements can be billed with
    :meth:`charge`; the running total is capped by the step budget.
    """

    def __init__(self, name: str, factory: Callable[["Stream"], Iterator[Nat]], facts: dict | None = None,
                 budget: int | None = None):
        self.name = name
        self.facts = dict(facts or {})
        self.budget = budget
        self._factory = factory
        self._it: Iterator[Nat] | None = None
        self._items: list = []
        self._members: set = set()
        self._done = False
        self._steps = 0
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"Stream({self.name!r}, {len(self._items)} materialized)"

    @property
    def materialized(self) -> tuple:
        return tuple(self._items)

    @property
    def exhausted(self) -> bool:
        return self._done

    def charge(self, n: int = 1) -> None:
        self._steps += n
        limit = self.budget if self.budget is not None else step_budget()
        if self._steps > limit:
            raise ResourceExhausted(f"stream {self.name} exceeded its step budget of {limit}")

    def _advance(self) -> bool:
        if self._done:
            return False
        if self._it is None:
            self._it = iter(self._factory(self))
        self.charge()
        try:
            x = next(self._it)
        except StopIteration:
            self._done = True
            return False
        if self._items and not x > self._items[-1]:
            raise RadoError(f"stream {self.name} is not strictly increasing")
        self._items.append(x)
        self._members.add(x)
        return True

    def nth(self, i: int) -> Nat:
        with self._lock:
            while len(self._items) <= i:
                if not self._advance():
                    raise IndexError(f"stream {self.name} has only {len(self._items)} elements")
            return self._items[i]

    def length_at_least(self, n: int) -> bool:
        try:
            self.nth(n - 1)
        except IndexError:
            return False
        return True

    def contains(self, x: Nat) -> bool:
        with self._lock:
            while not self._done and (not self._items or self._items[-1] < x):
                self._advance()
            return x in self._members

    def iter_from(self, lo: Nat = 0) -> Iterator[Nat]:
        """Elements >= lo in increasing order (possibly infinite)."""
        i = bisect.bisect_left(self._items, lo) if self._items else 0
        while True:
            try:
                x = self.nth(i)
            except IndexError:
                return
            if x >= lo:
                yield x
            i += 1

    def below(self, hi: Nat) -> list:
        """All elements < hi."""
        out = []
        for x in self.iter_from(0):
            if x >= hi:
                break
            out.append(x)
        return out

    def index_of(self, x: Nat) -> int:
        if not self.contains(x):
            raise KeyError(x)
        return bisect.bisect_left(self._items, x)


_registry: dict[str, Stream] = {}
_resolvers: list[tuple[re.Pattern, Callable[[re.Match], Stream]]] = []
_reg_lock = threading.Lock()


def register(stream: Stream, replace: bool = False) -> Stream:
    with _reg_lock:
        old = _registry.get(stream.name)
        if old is not None and not replace:
            return old
        _registry[stream.name] = stream
        return stream


def add_resolver(pattern: str, build: Callable[[re.Match], Stream]) -> None:
    """Let names matching ``pattern`` be built lazily on first lookup."""
    _resolvers.append((re.compile(pattern), build))


def get_stream(name: str) -> Stream:
    s = _registry.get(name)
    if s is not None:
        return s
    for pat, build in _resolvers:
        m = pat.fullmatch(name)
        if m:
            return register(build(m))
    raise RadoError(f"unknown stream {name!r}")


def known_streams() -> list[str]:
    return sorted(_registry)
