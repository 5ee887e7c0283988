"""Terminated digraphs and the infinite digraph they generate.

A vertex of the generated graph is a finite sequence: zero or more
nonterminal ids followed by exactly one terminal id. Two distinct sequences
are joined by the edge that the base graph has between their entries at the
first position where they differ.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .digraph import Digraph, iter_bits, to_mask
from .errors import CapExceeded, InputError

SeqVertex = tuple[int, ...]

DEFAULT_MATERIALIZE_CAP = 200_000


def seq_str(s: Sequence[int]) -> str:
    """Dotted text form, e.g. ``3.1.0``."""
    return ".".join(map(str, s))


def parse_seq(text: str) -> SeqVertex:
    try:
        return tuple(int(p) for p in text.strip().split("."))
    except ValueError:
        raise InputError(f"not a dotted vertex sequence: {text!r}") from None


@dataclass(frozen=True)
class TerminatedDigraph:
    g: Digraph
    terminals: frozenset[int]

    def __post_init__(self) -> None:
        if not self.terminals:
            raise InputError("a terminated digraph needs at least one terminal")
        self.g.check_vertices(self.terminals)

    @classmethod
    def of(cls, n: int, edges: Iterable[tuple[int, int]], terminals: Iterable[int]) -> TerminatedDigraph:
        return cls(Digraph(n, edges), frozenset(terminals))

    @cached_property
    def nonterminals(self) -> frozenset[int]:
        return frozenset(self.g.vertices) - self.terminals

    @cached_property
    def terminal_mask(self) -> int:
        return to_mask(self.terminals)

    @cached_property
    def nonterminal_mask(self) -> int:
        return self.g.all_mask & ~self.terminal_mask

    @property
    def least_terminal(self) -> int:
        return min(self.terminals)

    def is_terminal(self, v: int) -> bool:
        return v in self.terminals

    def reversed(self) -> TerminatedDigraph:
        return TerminatedDigraph(Digraph.from_masks(self.g.pred, self.g.succ), self.terminals)

    def is_valid(self, s: Sequence[int]) -> bool:
        if not s:
            return False
        n = self.g.n
        if not all(isinstance(v, int) and 0 <= v < n for v in s):
            return False
        return s[-1] in self.terminals and not any(v in self.terminals for v in s[:-1])

    def check_seq(self, s: Sequence[int]) -> SeqVertex:
        if not self.is_valid(s):
            raise InputError(
                f"{seq_str(s) or '<empty>'} is not a vertex: need nonterminals followed by one terminal"
            )
        return tuple(s)

    def ext(self, v: int) -> SeqVertex:
        """``v`` itself for a terminal, ``v`` followed by the least terminal otherwise."""
        return (v,) if v in self.terminals else (v, self.least_terminal)


def depth(s: Sequence[int]) -> int:
    """Number of nonterminal entries."""
    return len(s) - 1


def delta(x: Sequence[int], y: Sequence[int]) -> int:
    """First position where ``x`` and ``y`` differ."""
    for i, (a, b) in enumerate(zip(x, y)):
        if a != b:
            return i
    if len(x) == len(y):
        raise InputError(f"delta of identical sequences {seq_str(x)}")
    raise InputError(f"{seq_str(x)} and {seq_str(y)}: one is a proper prefix of the other")


def lazy_edge(td: TerminatedDigraph, x: Sequence[int], y: Sequence[int]) -> bool:
    td.check_seq(x)
    td.check_seq(y)
    i = delta(x, y)
    return td.g.has_edge(x[i], y[i])


def _edge_unchecked(g: Digraph, x: Sequence[int], y: Sequence[int]) -> bool:
    for a, b in zip(x, y):
        if a != b:
            return bool(g.succ[a] >> b & 1)
    return False


# -- blow-up product -----------------------------------------------------------------


def odot_labels(td: TerminatedDigraph) -> tuple[SeqVertex, ...]:
    """Vertex packing of the blow-up product: terminals first, then ``(n, v)`` pairs lexicographically."""
    t = sorted(td.terminals)
    pairs = [(n, v) for n in sorted(td.nonterminals) for v in td.g.vertices]
    return tuple((x,) for x in t) + tuple(pairs)


def odot(td: TerminatedDigraph, cap: int = DEFAULT_MATERIALIZE_CAP) -> TerminatedDigraph:
    """Replace every nonterminal by a copy of the whole graph; terminals stay put.

    The new terminals are the old ones plus every ``(nonterminal, terminal)``
    pair. Ids follow :func:`odot_labels`.
    """
    size = len(td.terminals) + len(td.nonterminals) * td.g.n
    if size > cap:
        raise CapExceeded("blow-up product", size, cap)
    labels = odot_labels(td)
    succ = [0] * len(labels)
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            if i != j and _edge_unchecked(td.g, x, y):
                succ[i] |= 1 << j
    terminals = frozenset(i for i, x in enumerate(labels) if x[-1] in td.terminals)
    return TerminatedDigraph(Digraph.from_masks(succ), terminals)


# -- truncations -----------------------------------------------------------------------


def vertex_count(td: TerminatedDigraph, d: int) -> int:
    nt, t = len(td.nonterminals), len(td.terminals)
    return t * sum(nt**k for k in range(d + 1))


def iter_vertices(td: TerminatedDigraph, d: int) -> Iterator[SeqVertex]:
    """Every vertex with at most ``d`` nonterminals, shortest first, then lexicographic."""
    nts = sorted(td.nonterminals)
    ts = sorted(td.terminals)
    for k in range(d + 1):
        for prefix in product(nts, repeat=k):
            for t in ts:
                yield prefix + (t,)


@dataclass(frozen=True)
class Materialization:
    td: TerminatedDigraph
    depth: int
    digraph: Digraph
    labels: tuple[SeqVertex, ...]

    @cached_property
    def index(self) -> dict[SeqVertex, int]:
        return {s: i for i, s in enumerate(self.labels)}

    def id_of(self, s: Sequence[int]) -> int:
        try:
            return self.index[tuple(s)]
        except KeyError:
            raise InputError(f"{seq_str(s)} is not in the depth-{self.depth} truncation") from None

    def mask_of(self, seqs: Iterable[Sequence[int]]) -> int:
        return to_mask(self.index[tuple(s)] for s in seqs)

    def mask_where(self, pred) -> int:
        return to_mask(i for i, s in enumerate(self.labels) if pred(s))

    def labels_of(self, mask: int) -> list[SeqVertex]:
        return [self.labels[i] for i in iter_bits(mask)]

    def depth_mask(self, d: int) -> int:
        """Ids of labels with at most ``d`` nonterminals (a prefix of the id range)."""
        return (1 << vertex_count(self.td, min(d, self.depth))) - 1


def materialize(td: TerminatedDigraph, depth: int, cap: int = DEFAULT_MATERIALIZE_CAP) -> Materialization:
    """Finite induced subgraph on the vertices with at most ``depth`` nonterminals."""
    if depth < 0:
        raise InputError("depth must be non-negative")
    count = vertex_count(td, depth)
    if count > cap:
        raise CapExceeded(f"materialization to depth {depth}", count, cap)
    labels = tuple(iter_vertices(td, depth))
    succ = [0] * count
    pred = [0] * count
    g = td.g

    # Group by the entry at ``pos``; edges between groups are all-or-nothing.
    stack: list[tuple[list[int], int]] = [(list(range(count)), 0)]
    while stack:
        members, pos = stack.pop()
        groups: dict[int, list[int]] = {}
        for i in members:
            groups.setdefault(labels[i][pos], []).append(i)
        gmask = {a: to_mask(ms) for a, ms in groups.items()}
        for a, ms in groups.items():
            out = 0
            inn = 0
            for b, bm in gmask.items():
                if b != a:
                    if g.succ[a] >> b & 1:
                        out |= bm
                    if g.pred[a] >> b & 1:
                        inn |= bm
            if out or inn:
                for i in ms:
                    succ[i] |= out
                    pred[i] |= inn
            if len(ms) > 1:
                stack.append((ms, pos + 1))
    return Materialization(td, depth, Digraph.from_masks(succ, pred), labels)
