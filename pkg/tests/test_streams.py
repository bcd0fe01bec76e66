import threading

import pytest

from radokit.core import RadoError, ResourceExhausted
from radokit.streams import DEFAULT_BUDGET, Stream, get_stream, register, step_budget


def squares(s):
    n = 0
    while True:
        yield n * n
        n += 1


def test_memoized_and_monotone():
    s = Stream("t.sq", squares)
    assert s.nth(5) == 25
    assert s.materialized == (0, 1, 4, 9, 16, 25)
    assert s.contains(36) and not s.contains(37)
    assert s.index_of(49) == 7
    assert s.below(20) == [0, 1, 4, 9, 16]
    assert list(zip(range(3), s.iter_from(10))) == [(0, 16), (1, 25), (2, 36)]


def test_finite_stream_exhausts():
    s = Stream("t.fin", lambda st: iter([1, 4, 9]))
    assert s.contains(9) and not s.contains(10)
    assert s.exhausted and not s.length_at_least(4)
    with pytest.raises(IndexError):
        s.nth(3)


def test_non_monotone_factory_is_an_error():
    s = Stream("t.bad", lambda st: iter([3, 2]))
    with pytest.raises(RadoError):
        s.nth(1)


def test_budget_is_enforced():
    s = Stream("t.budget", squares, budget=10)
    with pytest.raises(ResourceExhausted):
        s.nth(50)


def test_env_budget(monkeypatch):
    monkeypatch.delenv("RADOKIT_BUDGET", raising=False)
    assert step_budget() == DEFAULT_BUDGET
    monkeypatch.setenv("RADOKIT_BUDGET", "7")
    assert step_budget() == 7
    s = Stream("t.env", squares)
    with pytest.raises(ResourceExhausted):
        s.nth(20)
    monkeypatch.setenv("RADOKIT_BUDGET", "lots")
    with pytest.raises(RadoError):
        step_budget()


def test_registry_and_unknown_names():
    s = register(Stream("t.reg", squares))
    assert get_stream("t.reg") is s
    assert register(Stream("t.reg", squares)) is s
    with pytest.raises(RadoError):
        get_stream("t.no-such-stream")


def test_concurrent_readers_agree():
    s = Stream("t.conc", squares)
    out: list = []

    def read():
        out.append([s.nth(i) for i in range(300)])

    ts = [threading.Thread(target=read) for _ in range(6)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert all(o == [i * i for i in range(300)] for o in out)
