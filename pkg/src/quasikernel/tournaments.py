"""Level maps, homomorphisms onto the descending-naturals targets, OUT(3) promotion."""

from __future__ import annotations

from collections.abc import Hashable, Mapping
from dataclasses import dataclass
from enum import Enum

from .digraph import (
    INF,
    Digraph,
    condensation,
    closure_mask,
    is_semicomplete,
    iter_bits,
)
from .errors import InputError
from .oracle import ClassClaim, ClassKind


class TargetKind(Enum):
    """Edge rules of the two homomorphism targets on levels.

    Loops of the targets are never materialized; only the rule on levels is kept.
    """

    T_INF = "T_inf"  # (u, v) allowed iff level(u) >= level(v)
    T_3 = "T_3"  # additionally level(v) == level(u) + 1

    def allows(self, lu: int, lv: int) -> bool:
        if lu >= lv:
            return True
        return self is TargetKind.T_3 and lv == lu + 1


@dataclass(frozen=True)
class LevelMap:
    """Levels of vertices; ``None`` marks a vertex that was never reached."""

    base: Hashable
    levels: Mapping[int, int | None]

    @property
    def max_level(self) -> int:
        return max((lv for lv in self.levels.values() if lv is not None), default=0)


@dataclass(frozen=True)
class HomCheck:
    ok: bool
    violation: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def level_map(g: Digraph, x: int) -> LevelMap:
    """BFS distance from ``x``."""
    g.check_vertices([x])
    levels: dict[int, int | None] = {v: None for v in g.vertices}
    levels[x] = 0
    reached = frontier = 1 << x
    depth = 0
    while frontier:
        depth += 1
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.succ[v]
        frontier = nxt & ~reached
        reached |= frontier
        for v in iter_bits(frontier):
            levels[v] = depth
    return LevelMap(x, levels)


def check_hom(g: Digraph, lm: LevelMap, target: TargetKind) -> HomCheck:
    """Does every edge respect ``target``'s rule under ``lm``? Reports the first violation."""
    unreached = [v for v in g.vertices if lm.levels.get(v) is None]
    if unreached:
        raise InputError(f"vertices without a level: {unreached[:10]}")
    for u, v in g.edges:
        if not target.allows(lm.levels[u], lm.levels[v]):  # type: ignore[arg-type]
            return HomCheck(False, (u, v))
    return HomCheck(True)


def t3_prefix(k: int) -> Digraph:
    """First ``k`` vertices of the descending-naturals target with successor edges."""
    if k < 1:
        raise InputError("k must be at least 1")
    edges = [(i, j) for i in range(k) for j in range(i)]
    edges += [(i, i + 1) for i in range(k - 1)]
    return Digraph(k, edges)


def promote_out3(g: Digraph, x: int) -> int:
    """A vertex whose three-step out-closure is everything.

    ``x`` must reach every vertex. If its eccentricity is at most 3, ``x``
    itself works; otherwise the least vertex at maximum distance ``n`` beats
    everything within distance ``n - 2`` of ``x``.
    """
    if not is_semicomplete(g):
        raise InputError("promote_out3 needs a tournament (every pair joined)")
    lm = level_map(g, x)
    if any(lv is None for lv in lm.levels.values()):
        raise InputError(f"vertex {x} does not reach every vertex")
    n = lm.max_level
    if n <= 3:
        return x
    return min(v for v, lv in lm.levels.items() if lv == n)


def out_inf_witness(g: Digraph) -> ClassClaim:
    """One vertex (least id) from each condensation class with no incoming cross-class edge."""
    cond = condensation(g)
    witness = set()
    for i, cls in enumerate(cond.classes):
        has_incoming = any(cond.class_of[u] != i for v in cls for u in iter_bits(g.pred[v]))
        if not has_incoming:
            witness.add(min(cls))
    return ClassClaim(ClassKind.out(INF), frozenset(witness))


def out3_reaches_all(g: Digraph, y: int) -> bool:
    return closure_mask(g.succ, 1 << y, 3) == g.all_mask

