"""Class kinds, claims, a mechanical claim verifier and exhaustive deciders.

The deciders here are the slow trusted reference: they enumerate candidate
witnesses in a fixed canonical order and never take shortcuts that could
change which witness is reported.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from itertools import combinations

from .digraph import (
    INF,
    Digraph,
    Hops,
    closure_mask,
    induced_mask,
    iter_bits,
    parse_hops,
    to_mask,
    to_set,
)
from .errors import CapExceeded, InputError

DEFAULT_CAP_SINGLE = 14
DEFAULT_CAP_INOUT = 10
MAX_ENUMERATION_N = 4


def _fmt_hops(n: Hops) -> str:
    return "inf" if n == INF else str(n)


@dataclass(frozen=True)
class ClassKind:
    """``OUT(n)``, ``IN(n)`` or ``INOUT(m, k)``.

    For ``INOUT(m, k)`` the in-part carries an ``IN(m)`` witness and the
    out-part an ``OUT(k)`` witness, each inside its own induced subgraph.
    """

    name: str
    n: Hops
    k: Hops | None = None

    def __post_init__(self) -> None:
        if self.name not in ("OUT", "IN", "INOUT"):
            raise InputError(f"unknown class {self.name!r}")
        for p in (self.n, self.k):
            if p is not None and (p != INF and (int(p) != p or p < 1)):
                raise InputError(f"class parameters must be positive, got {p!r}")
        if (self.name == "INOUT") != (self.k is not None):
            raise InputError("INOUT takes two parameters, OUT/IN take one")

    @classmethod
    def out(cls, n: Hops) -> ClassKind:
        return cls("OUT", n)

    @classmethod
    def in_(cls, n: Hops) -> ClassKind:
        return cls("IN", n)

    @classmethod
    def inout(cls, m: Hops, k: Hops) -> ClassKind:
        return cls("INOUT", m, k)

    @property
    def in_hops(self) -> Hops:
        """Hop budget of the in-side (INOUT only)."""
        return self.n

    @property
    def out_hops(self) -> Hops:
        """Hop budget of the out-side (INOUT only)."""
        assert self.k is not None
        return self.k

    @classmethod
    def parse(cls, text: str) -> ClassKind:
        """Accept ``out2``, ``in3``, ``outinf``, ``inout22``, ``inout2,1`` or ``OUT(2)``-style."""
        t = text.strip().lower().replace(" ", "")
        if t.startswith("inout"):
            body = t[5:].strip("()")
            if "," in body:
                parts = body.split(",")
            elif len(body) == 2 and body.isdigit():
                parts = [body[0], body[1]]
            else:
                parts = []
            if len(parts) != 2:
                raise InputError(f"cannot parse class {text!r}")
            return cls.inout(parse_hops(parts[0]), parse_hops(parts[1]))
        m = re.fullmatch(r"(out|in)\(?(\d+|inf|infinity)\)?", t)
        if not m:
            raise InputError(f"cannot parse class {text!r}")
        return cls(m.group(1).upper(), parse_hops(m.group(2)))

    def __str__(self) -> str:
        if self.k is None:
            return f"{self.name}({_fmt_hops(self.n)})"
        return f"INOUT({_fmt_hops(self.n)},{_fmt_hops(self.k)})"


@dataclass(frozen=True)
class ClassClaim:
    """A claimed class membership with explicit witnesses.

    For OUT/IN kinds ``witness_a`` is the witness. For INOUT kinds
    ``witness_a`` covers ``partition[0]`` (the out-part) and ``witness_b``
    covers ``partition[1]`` (the in-part).
    """

    kind: ClassKind
    witness_a: frozenset[int]
    witness_b: frozenset[int] | None = None
    partition: tuple[frozenset[int], frozenset[int]] | None = None

    @classmethod
    def single(cls, kind: ClassKind, witness: Iterable[int]) -> ClassClaim:
        return cls(kind, frozenset(witness))

    @classmethod
    def split(
        cls,
        kind: ClassKind,
        out_part: Iterable[int],
        out_witness: Iterable[int],
        in_part: Iterable[int],
        in_witness: Iterable[int],
    ) -> ClassClaim:
        return cls(
            kind,
            frozenset(out_witness),
            frozenset(in_witness),
            (frozenset(out_part), frozenset(in_part)),
        )

    @property
    def out_part(self) -> frozenset[int]:
        assert self.partition is not None
        return self.partition[0]

    @property
    def in_part(self) -> frozenset[int]:
        assert self.partition is not None
        return self.partition[1]

    def with_kind(self, kind: ClassKind) -> ClassClaim:
        return ClassClaim(kind, self.witness_a, self.witness_b, self.partition)

    def as_inout(self, g: Digraph, m: Hops, k: Hops) -> ClassClaim:
        """Re-express an OUT/IN/INOUT claim as ``INOUT(m, k)`` over ``g``.

        An OUT claim becomes an out-part covering everything; an IN claim an
        in-part covering everything.
        """
        kind = ClassKind.inout(m, k)
        everything = frozenset(g.vertices)
        if self.kind.name == "OUT":
            return ClassClaim.split(kind, everything, self.witness_a, (), ())
        if self.kind.name == "IN":
            return ClassClaim.split(kind, (), (), everything, self.witness_a)
        return self.with_kind(kind)

    def relabel(self, mapping: tuple[int, ...] | dict[int, int]) -> ClassClaim:
        def f(s: frozenset[int] | None) -> frozenset[int] | None:
            return None if s is None else frozenset(mapping[v] for v in s)

        part = None
        if self.partition is not None:
            part = (f(self.partition[0]), f(self.partition[1]))
        return ClassClaim(self.kind, f(self.witness_a), f(self.witness_b), part)  # type: ignore[arg-type]

    def describe(self) -> list[tuple[str, str]]:
        """Stable ``key: value`` pairs for reports."""
        def fmt(s: Iterable[int]) -> str:
            return "{" + ",".join(map(str, sorted(s))) + "}"

        rows = [("kind", str(self.kind))]
        if self.kind.name != "INOUT":
            rows.append(("witness", fmt(self.witness_a)))
        else:
            rows += [
                ("out_part", fmt(self.out_part)),
                ("out_witness", fmt(self.witness_a)),
                ("in_part", fmt(self.in_part)),
                ("in_witness", fmt(self.witness_b or ())),
            ]
        return rows


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    failures: tuple[tuple[object, str], ...] = field(default=())

    @classmethod
    def from_failures(cls, failures: Iterable[tuple[object, str]]) -> VerifyReport:
        failures = tuple(failures)
        return cls(not failures, failures)

    def __bool__(self) -> bool:
        return self.ok


# -- verification ---------------------------------------------------------------


def _witness_failures(
    g: Digraph, part: int, witness: int, hops: Hops, direction: str, label: str
) -> list[tuple[object, str]]:
    failures: list[tuple[object, str]] = []
    for v in iter_bits(witness & ~part):
        failures.append((v, f"{label} witness member outside its part"))
    for v in iter_bits(witness & part):
        for w in iter_bits(g.succ[v] & witness & part):
            failures.append((v, f"{label} witness not independent: edge {v}->{w}"))
    nbrs = g.succ if direction == "out" else g.pred
    covered = closure_mask(nbrs, witness & part, hops, within=part)
    for v in iter_bits(part & ~covered):
        arrow = "from" if direction == "out" else "to"
        failures.append((v, f"uncovered: no {label} path of length <= {_fmt_hops(hops)} {arrow} the witness"))
    return failures


def _range_failures(g: Digraph, named: Iterable[tuple[str, Iterable[int]]]) -> list[tuple[object, str]]:
    bad = []
    for name, vs in named:
        for v in sorted(vs):
            if not (0 <= v < g.n):
                bad.append((v, f"{name} member outside 0..{g.n - 1}"))
    return bad


def verify_claim(g: Digraph, c: ClassClaim) -> VerifyReport:
    """Mechanically check ``c`` against ``g``; malformed claims become failures."""
    kind = c.kind
    if kind.name in ("OUT", "IN"):
        bad = _range_failures(g, [("witness", c.witness_a)])
        if bad:
            return VerifyReport.from_failures(bad)
        direction = "out" if kind.name == "OUT" else "in"
        return VerifyReport.from_failures(
            _witness_failures(g, g.all_mask, to_mask(c.witness_a), kind.n, direction, direction)
        )

    if c.partition is None or c.witness_b is None:
        return VerifyReport.from_failures([(None, "INOUT claim without partition or in-witness")])
    v_out, v_in = c.partition
    bad = _range_failures(
        g,
        [("out_part", v_out), ("in_part", v_in), ("out_witness", c.witness_a), ("in_witness", c.witness_b)],
    )
    if bad:
        return VerifyReport.from_failures(bad)
    out_mask, in_mask = to_mask(v_out), to_mask(v_in)
    failures: list[tuple[object, str]] = []
    for v in iter_bits(out_mask & in_mask):
        failures.append((v, "partition defect: vertex in both parts"))
    for v in iter_bits(g.all_mask & ~(out_mask | in_mask)):
        failures.append((v, "partition defect: vertex in neither part"))
    failures += _witness_failures(g, out_mask, to_mask(c.witness_a), kind.out_hops, "out", "out")
    failures += _witness_failures(g, in_mask, to_mask(c.witness_b), kind.in_hops, "in", "in")
    failures.sort(key=lambda f: (-1 if f[0] is None else f[0]))
    return VerifyReport.from_failures(failures)


def verify_cover(g: Digraph, a: Iterable[int], b: Iterable[int]) -> VerifyReport:
    """Check a two-sided cover: disjoint independent ``a``, ``b`` with ``Out2(a) ∪ In2(b) = V``."""
    am, bm = g.check_vertices(a), g.check_vertices(b)
    failures: list[tuple[object, str]] = []
    for v in iter_bits(am & bm):
        failures.append((v, "in both A and B"))
    for name, m in (("A", am), ("B", bm)):
        for v in iter_bits(m):
            for w in iter_bits(g.succ[v] & m):
                failures.append((v, f"{name} not independent: edge {v}->{w}"))
    covered = closure_mask(g.succ, am, 2) | closure_mask(g.pred, bm, 2)
    for v in iter_bits(g.all_mask & ~covered):
        failures.append((v, "uncovered by Out2(A) and In2(B)"))
    return VerifyReport.from_failures(sorted(failures, key=lambda f: f[0]))


# -- exhaustive deciders ------------------------------------------------------------


def _independent_sets_of_size(adj: tuple[int, ...], candidates: int, size: int) -> Iterator[int]:
    """Independent subsets of ``candidates`` with ``size`` members, lexicographic order."""
    if size == 0:
        yield 0
        return

    def rec(chosen: int, cands: int, left: int) -> Iterator[int]:
        if left == 0:
            yield chosen
            return
        if cands.bit_count() < left:
            return
        for v in iter_bits(cands):
            higher = cands & ~((2 << v) - 1)
            yield from rec(chosen | 1 << v, higher & ~adj[v], left - 1)

    yield from rec(0, candidates, size)


def _maximal_independent_sets(adj: tuple[int, ...], candidates: int) -> Iterator[int]:
    """Maximal independent subsets of ``candidates`` (Bron-Kerbosch on the non-adjacency)."""

    def rec(r: int, p: int, x: int) -> Iterator[int]:
        if not p and not x:
            yield r
            return
        pivot_pool = p | x
        pivot = max(iter_bits(pivot_pool), key=lambda u: (p & ~adj[u] & ~(1 << u)).bit_count())
        for v in iter_bits(p & (adj[pivot] | 1 << pivot)):
            non_nbrs = candidates & ~adj[v] & ~(1 << v)
            yield from rec(r | 1 << v, p & non_nbrs, x & non_nbrs)
            p &= ~(1 << v)
            x |= 1 << v

    if not candidates:
        yield 0
        return
    yield from rec(0, candidates, 0)


def _exists_witness(g: Digraph, part: int, hops: Hops, direction: str) -> bool:
    nbrs = g.succ if direction == "out" else g.pred
    return any(
        closure_mask(nbrs, s, hops, within=part) == part
        for s in _maximal_independent_sets(g.adj, part)
    )


def _first_witness(g: Digraph, part: int, hops: Hops, direction: str) -> int | None:
    """Minimum-size, then lexicographically least, covering independent subset of ``part``."""
    nbrs = g.succ if direction == "out" else g.pred
    if not _exists_witness(g, part, hops, direction):
        return None
    for size in range(part.bit_count() + 1):
        for s in _independent_sets_of_size(g.adj, part, size):
            if closure_mask(nbrs, s, hops, within=part) == part:
                return s
    raise AssertionError("a maximal witness exists, so a minimum one must")


def decide_class(g: Digraph, kind: ClassKind, cap: int | None = None) -> ClassClaim | None:
    """Exhaustive class membership decision.

    OUT/IN: minimum-cardinality then lexicographically least witness.
    INOUT: in-parts enumerated by size then lexicographically (so the empty
    in-part is tried first); the first bipartition whose two sides both carry
    witnesses wins, with minimum witnesses on each side.
    """
    if kind.name == "INOUT":
        cap = DEFAULT_CAP_INOUT if cap is None else cap
    else:
        cap = DEFAULT_CAP_SINGLE if cap is None else cap
    if g.n > cap:
        raise CapExceeded(f"decide {kind}", g.n, cap)

    if kind.name in ("OUT", "IN"):
        w = _first_witness(g, g.all_mask, kind.n, kind.name.lower())
        return None if w is None else ClassClaim(kind, to_set(w))

    everything = g.all_mask
    for size in range(g.n + 1):
        for combo in combinations(range(g.n), size):
            in_mask = to_mask(combo)
            out_mask = everything & ~in_mask
            if not _exists_witness(g, in_mask, kind.in_hops, "in"):
                continue
            if not _exists_witness(g, out_mask, kind.out_hops, "out"):
                continue
            wb = _first_witness(g, in_mask, kind.in_hops, "in")
            wa = _first_witness(g, out_mask, kind.out_hops, "out")
            assert wa is not None and wb is not None
            return ClassClaim.split(kind, to_set(out_mask), to_set(wa), to_set(in_mask), to_set(wb))
    return None


def all_digraphs(n: int) -> Iterator[Digraph]:
    """Every loopless digraph on ``n`` vertices, indexed by edge-set bitmask.

    Bit ``i`` of the index selects the ``i``-th ordered pair in ascending ``(u, v)`` order.
    """
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    for code in range(1 << len(pairs)):
        yield Digraph(n, (p for i, p in enumerate(pairs) if code >> i & 1))


def decide_all_small(
    n: int, kind: ClassKind, max_n: int = MAX_ENUMERATION_N
) -> Iterator[tuple[Digraph, ClassClaim | None]]:
    if n > max_n:
        raise CapExceeded("digraph enumeration", n, max_n)
    if n < 0:
        raise InputError("vertex count must be non-negative")
    for g in all_digraphs(n):
        yield g, decide_class(g, kind)


def subgraph_claim(g: Digraph, part: int, claim: ClassClaim) -> ClassClaim:
    """Lift a claim about ``G[part]`` (local ids) back to ``g``'s ids."""
    return claim.relabel(induced_mask(g, part).to_old)
