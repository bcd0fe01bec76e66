"""Text form of views and vertex sets.

    view ::= base | switch(view,set) | flipwithin(view,set)
           | delete(view,intlist) | restrict(view,set)
    set  ::= {intlist} | N(int) | NCS(int) | all | W({intlist},{intlist})
           | set (+|&|-|^) set | (set) | stream:name

Binary set operators share one precedence level and associate to the left.
Integers are decimal or tower literals such as ``2^(2^2000)+2^3``.
"""
from __future__ import annotations

import re

from .core import ParseError
from .nat import Nat, parse as parse_nat, render as render_nat
from .views import (All, Base, Delete, Diff, Finite, FlipWithin, Inter, Nbhd, NonNbhdStrict, Restrict,
                    SetSpec, Stream, Switch, SymDiff, Union, ViewSpec, WitnessSet)

_OPS = {"+": Union, "&": Inter, "-": Diff, "^": SymDiff}
_OP_CHAR = {v: k for k, v in _OPS.items()}
_NAME = re.compile(r"[A-Za-z0-9_.<>\-]+")


def _ints(xs) -> str:
    return ",".join(render_nat(x) for x in xs)


def render_set(s: SetSpec) -> str:
    t = type(s)
    if t is Finite:
        return "{" + _ints(s.elems) + "}"
    if t is Nbhd:
        return f"N({render_nat(s.v)})"
    if t is NonNbhdStrict:
        return f"NCS({render_nat(s.v)})"
    if t is All:
        return "all"
    if t is WitnessSet:
        return "W({" + _ints(s.U) + "},{" + _ints(s.V) + "})"
    if t is Stream:
        return f"stream:{s.name}"
    if t in _OP_CHAR:
        right = render_set(s.b)
        if type(s.b) in _OP_CHAR:
            right = f"({right})"
        return render_set(s.a) + _OP_CHAR[t] + right
    raise TypeError(f"cannot render {s!r}")


def render_view(v: ViewSpec) -> str:
    t = type(v)
    if t is Base:
        return "base"
    if t is Switch:
        return f"switch({render_view(v.view)},{render_set(v.set)})"
    if t is FlipWithin:
        return f"flipwithin({render_view(v.view)},{render_set(v.set)})"
    if t is Delete:
        return f"delete({render_view(v.view)},{_ints(v.elems)})"
    if t is Restrict:
        return f"restrict({render_view(v.view)},{render_set(v.set)})"
    raise TypeError(f"cannot render {v!r}")


def render(x) -> str:
    return render_view(x) if isinstance(x, ViewSpec) else render_set(x)


class _Parser:
    def __init__(self, text: str):
        self.s = re.sub(r"\s+", "", text)
        self.i = 0

    def fail(self, what: str):
        raise ParseError(f"{what} at column {self.i + 1} in {self.s!r}")

    def peek(self, lit: str) -> bool:
        return self.s.startswith(lit, self.i)

    def eat(self, lit: str) -> None:
        if not self.peek(lit):
            self.fail(f"expected {lit!r}")
        self.i += len(lit)

    def done(self) -> None:
        if self.i != len(self.s):
            self.fail("unexpected trailing input")

    def nat(self) -> Nat:
        start = self.i
        depth = 0
        while self.i < len(self.s):
            c = self.s[self.i]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    break
                depth -= 1
            elif c in ",;}" and depth == 0:
                break
            elif not (c.isdigit() or c in "^+"):
                break
            self.i += 1
        text = self.s[start:self.i]
        if not text:
            self.fail("expected a natural number")
        try:
            return parse_nat(text)
        except ValueError as e:
            self.i = start
            self.fail(str(e))

    def intlist(self, close: str) -> tuple:
        out = []
        if self.peek(close):
            return ()
        while True:
            out.append(self.nat())
            if self.peek(","):
                self.i += 1
                continue
            return tuple(out)

    def braced(self) -> tuple:
        self.eat("{")
        xs = self.intlist("}")
        self.eat("}")
        return xs

    def atom(self) -> SetSpec:
        if self.peek("{"):
            return Finite(self.braced())
        if self.peek("NCS("):
            self.i += 4
            v = self.nat()
            self.eat(")")
            return NonNbhdStrict(v)
        if self.peek("N("):
            self.i += 2
            v = self.nat()
            self.eat(")")
            return Nbhd(v)
        if self.peek("W("):
            self.i += 2
            u = self.braced()
            self.eat(",")
            v = self.braced()
            self.eat(")")
            try:
                return WitnessSet(u, v)
            except ValueError as e:
                self.fail(str(e))
        if self.peek("all"):
            self.i += 3
            return All()
        if self.peek("stream:"):
            self.i += 7
            m = _NAME.match(self.s, self.i)
            if not m:
                self.fail("expected a stream name")
            self.i = m.end()
            return Stream(m.group(0))
        if self.peek("("):
            self.i += 1
            s = self.set()
            self.eat(")")
            return s
        self.fail("expected a vertex set")

    def set(self) -> SetSpec:
        s = self.atom()
        while self.i < len(self.s) and self.s[self.i] in _OPS:
            op = _OPS[self.s[self.i]]
            self.i += 1
            s = op(s, self.atom())
        return s

    def view(self) -> ViewSpec:
        if self.peek("base"):
            self.i += 4
            return Base()
        for kw, cls in (("switch(", Switch), ("flipwithin(", FlipWithin), ("restrict(", Restrict)):
            if self.peek(kw):
                self.i += len(kw)
                inner = self.view()
                self.eat(",")
                s = self.set()
                self.eat(")")
                return cls(inner, s)
        if self.peek("delete("):
            self.i += 7
            inner = self.view()
            self.eat(",")
            if self.peek("{"):
                xs = self.braced()
            else:
                xs = self.intlist(")")
            self.eat(")")
            return Delete(inner, xs)
        self.fail("expected a view")


def parse_set(text: str) -> SetSpec:
    p = _Parser(text)
    s = p.set()
    p.done()
    return s


def parse_view(text: str) -> ViewSpec:
    p = _Parser(text)
    v = p.view()
    p.done()
    return v
