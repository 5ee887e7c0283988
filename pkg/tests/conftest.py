"""Shared fixtures, generators and networkx-based reference checks."""

from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import strategies as st

from quasikernel.digraph import Digraph
from quasikernel.ginfty import TerminatedDigraph

P3 = Digraph(3, [(0, 1), (1, 2)])
C3 = Digraph(3, [(0, 1), (1, 2), (2, 0)])
E3 = Digraph(3)
TT3 = Digraph(3, [(0, 1), (0, 2), (1, 2)])
RT4 = Digraph(4, [(i, j) for i in range(4) for j in range(i)])
PT4_EDGES = [(0, 1), (1, 2), (2, 3), (3, 1), (3, 0), (2, 0)]
PT4 = TerminatedDigraph.of(4, PT4_EDGES, [0])
ND2 = TerminatedDigraph.of(2, [(1, 0)], [0])


def random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])


def random_tournament(rng: random.Random, n: int) -> Digraph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            edges.append((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph(n, edges)


def random_td(rng: random.Random, max_n: int, p: float = 0.4) -> TerminatedDigraph:
    n = rng.randint(1, max_n)
    g = random_digraph(rng, n, p)
    ts = [v for v in range(n) if rng.random() < 0.4] or [rng.randrange(n)]
    return TerminatedDigraph(g, frozenset(ts))


def all_tds(max_n: int):
    for n in range(1, max_n + 1):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for bits in range(1 << len(pairs)):
            g = Digraph(n, [pr for i, pr in enumerate(pairs) if bits >> i & 1])
            for tm in range(1, 1 << n):
                yield TerminatedDigraph(g, frozenset(v for v in range(n) if tm >> v & 1))


@st.composite
def digraphs(draw, max_n: int = 8, min_n: int = 0) -> Digraph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Digraph(n, [p for p, b in zip(pairs, bits) if b])


@st.composite
def tournaments(draw, max_n: int = 8, min_n: int = 1) -> Digraph:
    n = draw(st.integers(min_n, max_n))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            edges.append((u, v) if draw(st.booleans()) else (v, u))
    return Digraph(n, edges)


@st.composite
def terminated(draw, max_n: int = 4) -> TerminatedDigraph:
    g = draw(digraphs(max_n=max_n, min_n=1))
    ts = draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    return TerminatedDigraph(g, frozenset(ts))


# -- reference implementations on networkx --------------------------------------------------


def to_nx(g: Digraph) -> nx.DiGraph:
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def nx_closure(h: nx.DiGraph, sources, hops, direction="out") -> set:
    if direction == "in":
        h = h.reverse(copy=False)
    reached = set()
    for s in sources:
        reached |= set(nx.single_source_shortest_path_length(h, s, cutoff=hops))
    return reached


def nx_independent(h: nx.DiGraph, a) -> bool:
    a = set(a)
    return not any(u in a and v in a for u, v in h.edges)


def nx_covers(h: nx.DiGraph, witness, hops, direction="out", part=None) -> bool:
    """Independent ``witness`` covering ``part`` by paths of length <= ``hops`` inside ``part``."""
    part = set(h.nodes) if part is None else set(part)
    sub = h.subgraph(part)
    if not set(witness) <= part or not nx_independent(sub, witness):
        return False
    return nx_closure(sub, witness, hops, direction) == part


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20261018)
