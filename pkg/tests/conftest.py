from __future__ import annotations

import functools

import pytest

from quasikernel import Digraph, enumerate_digraphs, make, parse_family


def dg(n, arcs):
    return Digraph.from_arcs(n, arcs)


def mask_to_set(mask):
    out = set()
    v = 0
    while mask:
        if mask & 1:
            out.add(v)
        mask >>= 1
        v += 1
    return out


def set_to_mask(s):
    out = 0
    for v in s:
        out |= 1 << v
    return out


@functools.lru_cache(maxsize=None)
def all_digraphs(n, sink_free=False):
    return tuple(enumerate_digraphs(n, sink_free=sink_free))


@pytest.fixture
def c3():
    return make(parse_family("cycle:3"))


@pytest.fixture
def c4():
    return make(parse_family("cycle:4"))


@pytest.fixture
def c5():
    return make(parse_family("cycle:5"))


@pytest.fixture
def two_cycle():
    return make(parse_family("cycle:2"))
