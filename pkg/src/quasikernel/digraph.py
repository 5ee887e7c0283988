"""Finite loopless digraphs over integer ids, with bitmask adjacency.

Vertex sets cross the public API as ``frozenset[int]``; internally every set
is an ``int`` bitmask, which keeps closures and independence checks cheap on
the materialized truncations of infinite graphs.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Union

from .errors import CapExceeded, InputError

Hops = Union[int, float]
INF: float = math.inf
Direction = Literal["out", "in"]

DEFAULT_CLIQUE_CAP = 20


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def parse_hops(n: Hops | str) -> Hops:
    """Accept a non-negative int, ``math.inf`` or the strings ``"inf"``/``"infinity"``."""
    if isinstance(n, str):
        if n.lower() in ("inf", "infinity"):
            return INF
        try:
            n = int(n)
        except ValueError:
            raise InputError(f"hop count must be a non-negative integer or infinity, got {n!r}") from None
    if n == INF:
        return INF
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise InputError(f"hop count must be a non-negative integer or infinity, got {n!r}")
    return int(n)


class Digraph:
    """Immutable loopless digraph on vertices ``0..n-1``.

    ``succ[v]`` and ``pred[v]`` are bitmasks. Equality and hashing are by
    vertex count and edge set.
    """

    __slots__ = ("n", "succ", "pred", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        succ = [0] * n
        pred = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InputError(f"loop at vertex {u} is not allowed")
            succ[u] |= 1 << v
            pred[v] |= 1 << u
        self.n = n
        self.succ: tuple[int, ...] = tuple(succ)
        self.pred: tuple[int, ...] = tuple(pred)

    @classmethod
    def from_masks(cls, succ: Iterable[int], pred: Iterable[int] | None = None) -> Digraph:
        """Build from successor bitmasks; ``pred`` is derived when omitted."""
        g = cls.__new__(cls)
        g.succ = tuple(succ)
        g.n = len(g.succ)
        for v, m in enumerate(g.succ):
            if m >> v & 1:
                raise InputError(f"loop at vertex {v} is not allowed")
            if m >> g.n:
                raise InputError(f"successor of {v} outside 0..{g.n - 1}")
        if pred is None:
            p = [0] * g.n
            for u, m in enumerate(g.succ):
                bit = 1 << u
                for v in iter_bits(m):
                    p[v] |= bit
            pred = p
        g.pred = tuple(pred)
        return g

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def adj(self) -> tuple[int, ...]:
        """Undirected adjacency: neighbours in either direction."""
        return tuple(s | p for s, p in zip(self.succ, self.pred))

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All edges in ascending ``(u, v)`` order."""
        return tuple((u, v) for u in range(self.n) for v in iter_bits(self.succ[u]))

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.succ)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.succ[u] >> v & 1)

    def successors(self, v: int) -> frozenset[int]:
        return to_set(self.succ[v])

    def predecessors(self, v: int) -> frozenset[int]:
        return to_set(self.pred[v])

    def check_vertices(self, vertices: Iterable[int]) -> int:
        """Range-check ``vertices`` and return them as a mask."""
        mask = 0
        for v in vertices:
            if not (isinstance(v, int) and 0 <= v < self.n):
                raise InputError(f"vertex {v!r} outside 0..{self.n - 1}")
            mask |= 1 << v
        return mask

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.succ == other.succ

    def __hash__(self) -> int:
        return hash((self.n, self.succ))

    def __repr__(self) -> str:
        return f"Digraph({self.n}, {list(self.edges)!r})"


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: frozenset[tuple[int, int]]  # pairs stored as (low, high)

    @cached_property
    def adj(self) -> tuple[int, ...]:
        adj = [0] * self.n
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return tuple(adj)


@dataclass(frozen=True)
class Induced:
    """An induced subgraph together with both id maps."""

    graph: Digraph
    to_old: tuple[int, ...]
    to_new: Mapping[int, int]

    def lift(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(self.to_old[v] for v in vertices)

    def lift_mask(self, mask: int) -> int:
        return to_mask(self.to_old[v] for v in iter_bits(mask))


@dataclass(frozen=True)
class Condensation:
    """Strongly connected components ordered by the reverse-edge convention.

    Class ``i`` precedes class ``j`` (``i ⪯ j``) when ``i`` is reachable from
    ``j``: edges run from the larger class into the smaller one. The maximum,
    if present, is the class that reaches every other class.
    """

    classes: tuple[frozenset[int], ...]
    class_of: tuple[int, ...]
    below: tuple[int, ...]  # below[j]: bitmask of classes i with i ⪯ j
    is_total_order: bool
    last_class: int | None

    def precedes(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)


# -- closures -----------------------------------------------------------------


def _step(nbrs: tuple[int, ...], frontier: int, within: int) -> int:
    out = 0
    for v in iter_bits(frontier):
        out |= nbrs[v]
    return out & within


def closure_mask(
    nbrs: tuple[int, ...], source: int, hops: Hops, within: int | None = None
) -> int:
    """Vertices reachable from ``source`` in at most ``hops`` steps along ``nbrs``.

    Paths are confined to ``within`` when given (``source`` is assumed inside it).
    """
    if within is None:
        within = (1 << len(nbrs)) - 1
    reached = source
    frontier = source
    steps = 0
    while frontier and steps < hops:
        frontier = _step(nbrs, frontier, within) & ~reached
        reached |= frontier
        steps += 1
    return reached


def closure(
    g: Digraph, a: Iterable[int], n: Hops | str, direction: Direction = "out"
) -> frozenset[int]:
    """Out- (or in-) closure of ``a``: endpoints of paths of length at most ``n``.

    The source set itself is always included (length-0 paths).
    """
    hops = parse_hops(n)
    if direction not in ("out", "in"):
        raise InputError(f"direction must be 'out' or 'in', got {direction!r}")
    source = g.check_vertices(a)
    nbrs = g.succ if direction == "out" else g.pred
    return to_set(closure_mask(nbrs, source, hops))


def out1_mask(g: Digraph, mask: int) -> int:
    return mask | _step(g.succ, mask, g.all_mask)


def in1_mask(g: Digraph, mask: int) -> int:
    return mask | _step(g.pred, mask, g.all_mask)


def independent_mask(g: Digraph, mask: int) -> bool:
    return all(not (g.succ[v] & mask) for v in iter_bits(mask))


def is_independent(g: Digraph, a: Iterable[int]) -> bool:
    """True iff no edge joins two members of ``a`` in either direction."""
    return independent_mask(g, g.check_vertices(a))


# -- structural operations -----------------------------------------------------


def induced_mask(g: Digraph, mask: int) -> Induced:
    to_old = tuple(iter_bits(mask))
    to_new = {old: new for new, old in enumerate(to_old)}
    succ = []
    for old in to_old:
        m = 0
        for w in iter_bits(g.succ[old] & mask):
            m |= 1 << to_new[w]
        succ.append(m)
    return Induced(Digraph.from_masks(succ), to_old, to_new)


def induced(g: Digraph, w: Iterable[int]) -> Induced:
    """``G[W]`` relabelled ``0..|W|-1`` in ascending original-id order."""
    return induced_mask(g, g.check_vertices(w))


def reverse(g: Digraph) -> Digraph:
    return Digraph.from_masks(g.pred, g.succ)


def complement_undirected(g: Digraph) -> UndirectedGraph:
    """Pairs ``{x, y}`` with no edge in either direction."""
    pairs = frozenset(
        (x, y)
        for x in range(g.n)
        for y in iter_bits(g.all_mask & ~g.adj[x] & ~((2 << x) - 1))
    )
    return UndirectedGraph(g.n, pairs)


def is_semicomplete(g: Digraph) -> bool:
    """At least one edge between every pair of distinct vertices."""
    return all((g.adj[v] | 1 << v) == g.all_mask for v in range(g.n))


def is_tournament(g: Digraph) -> bool:
    """Exactly one edge between every pair of distinct vertices."""
    return is_semicomplete(g) and all(not (g.succ[v] & g.pred[v]) for v in range(g.n))


def max_clique_at_most(
    gu: UndirectedGraph, n: int, cap: int = DEFAULT_CLIQUE_CAP
) -> frozenset[int] | None:
    """Lexicographically least ``n``-clique of ``gu``, or ``None`` if there is none.

    Exhaustive backtracking; refuses graphs with more than ``cap`` vertices.
    """
    if n < 1:
        raise InputError(f"clique size must be at least 1, got {n}")
    if gu.n > cap:
        raise CapExceeded("clique search", gu.n, cap)
    adj = gu.adj

    def extend(chosen: list[int], candidates: int) -> list[int] | None:
        if len(chosen) == n:
            return chosen
        if candidates.bit_count() < n - len(chosen):
            return None
        for v in iter_bits(candidates):
            found = extend(chosen + [v], candidates & adj[v] & ~((2 << v) - 1))
            if found is not None:
                return found
        return None

    found = extend([], (1 << gu.n) - 1)
    return None if found is None else frozenset(found)


def _tarjan(g: Digraph) -> list[list[int]]:
    """Iterative Tarjan; components come out sinks first."""
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, iter(iter_bits(g.succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, children = work[-1]
            for w in children:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(iter_bits(g.succ[w]))))
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    components.append(comp)
    return components


def condensation(g: Digraph) -> Condensation:
    comps = _tarjan(g)  # reverse topological order: sinks first
    ordered = sorted(comps, key=min)
    rank = {min(c): i for i, c in enumerate(ordered)}
    class_of = [0] * g.n
    for c in ordered:
        for v in c:
            class_of[v] = rank[min(c)]
    below = [0] * len(ordered)
    for c in comps:
        i = rank[min(c)]
        m = 1 << i
        for v in c:
            for w in iter_bits(g.succ[v]):
                j = class_of[w]
                if j != i:
                    m |= below[j]
        below[i] = m
    k = len(ordered)
    full = (1 << k) - 1
    total = all((below[i] | _above(below, i)) == full for i in range(k))
    last = next((i for i in range(k) if below[i] == full), None)
    return Condensation(
        classes=tuple(frozenset(c) for c in ordered),
        class_of=tuple(class_of),
        below=tuple(below),
        is_total_order=total,
        last_class=last,
    )


def _above(below: list[int], i: int) -> int:
    return to_mask(j for j in range(len(below)) if below[j] >> i & 1)


def greedy_max_independent(g: Digraph, forbidden: Iterable[int] = ()) -> frozenset[int]:
    """Maximal independent set avoiding ``forbidden``, scanning ids ascending."""
    return to_set(greedy_max_independent_mask(g, g.check_vertices(forbidden)))


def greedy_max_independent_mask(g: Digraph, forbidden: int = 0) -> int:
    chosen = 0
    blocked = forbidden
    for v in range(g.n):
        if not (blocked >> v & 1):
            chosen |= 1 << v
            blocked |= g.adj[v] | 1 << v
    return chosen
