"""Constructive witnesses on finite digraphs.

Every routine here returns witnesses that :func:`quasikernel.oracle.verify_claim`
accepts; none of them search exhaustively.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass

from .digraph import (
    Digraph,
    Hops,
    closure_mask,
    complement_undirected,
    greedy_max_independent_mask,
    in1_mask,
    induced_mask,
    is_semicomplete,
    iter_bits,
    max_clique_at_most,
    out1_mask,
    to_mask,
    to_set,
    DEFAULT_CLIQUE_CAP,
)
from .errors import CliqueFound, HereditaryContractError, InputError
from .oracle import ClassClaim, ClassKind, decide_class, verify_claim


def quasi_kernel_mask(g: Digraph, within: int | None = None) -> int:
    """Quasi-kernel of ``G[within]`` as a mask.

    Peel off the highest remaining vertex together with its out-neighbours,
    then on the way back add each peeled vertex unless the set built so far
    already has an edge into it.
    """
    remaining = g.all_mask if within is None else within
    peeled: list[int] = []
    while remaining:
        v = remaining.bit_length() - 1
        peeled.append(v)
        remaining &= ~(g.succ[v] | 1 << v)
    kernel = 0
    reached = 0  # kernel together with its out-neighbours
    for v in reversed(peeled):
        if not (reached >> v & 1):
            kernel |= 1 << v
            reached |= g.succ[v] | 1 << v
    return kernel


def quasi_kernel(g: Digraph) -> frozenset[int]:
    """Independent ``A`` with every vertex within two steps of ``A``."""
    return to_set(quasi_kernel_mask(g))


def quasi_sink(g: Digraph) -> frozenset[int]:
    """Independent ``A`` with every vertex within two steps *to* ``A``."""
    return to_set(quasi_kernel_mask(Digraph.from_masks(g.pred, g.succ)))


# -- stepping-up ------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionSpec:
    """Ordered partition ``(V0, ..., Vk)``; ``V0`` is the hereditary class."""

    classes: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, classes: Iterable[Iterable[int]]) -> PartitionSpec:
        return cls(tuple(frozenset(c) for c in classes))

    def masks_for(self, g: Digraph) -> list[int]:
        masks = [g.check_vertices(c) for c in self.classes]
        seen = 0
        for m in masks:
            if m & seen:
                raise InputError(f"partition classes overlap at {sorted(to_set(m & seen))}")
            seen |= m
        if seen != g.all_mask:
            raise InputError(f"partition misses vertices {sorted(to_set(g.all_mask & ~seen))}")
        if not masks:
            raise InputError("partition needs at least one class")
        return masks


@dataclass(frozen=True)
class SubSolver:
    """A named procedure producing a claim for an induced subgraph (local ids)."""

    name: str
    solve: Callable[[Digraph], ClassClaim]

    def __call__(self, g: Digraph) -> ClassClaim:
        return self.solve(g)


def edgeless_solver() -> SubSolver:
    """The whole vertex set witnesses OUT(1) on an edgeless graph."""
    return SubSolver("edgeless", lambda h: ClassClaim(ClassKind.out(1), frozenset(h.vertices)))


def quasi_kernel_solver() -> SubSolver:
    return SubSolver("quasi-kernel", lambda h: ClassClaim(ClassKind.out(2), quasi_kernel(h)))


def oracle_solver(kind: ClassKind) -> SubSolver:
    def solve(h: Digraph) -> ClassClaim:
        claim = decide_class(h, kind)
        if claim is None:
            raise InputError(f"subgraph is not in {kind}")
        return claim

    return SubSolver(f"oracle {kind}", solve)


def fixed_solver(name: str, claim: ClassClaim) -> SubSolver:
    """Returns ``claim`` unchanged; only valid for the exact graph it was built for."""
    return SubSolver(name, lambda h: claim)


def _run_solver(
    g: Digraph, part: int, solver: SubSolver, index: int, need: ClassKind
) -> ClassClaim:
    """Run ``solver`` on ``G[part]`` and lift its claim, checked against ``need``."""
    sub = induced_mask(g, part)
    try:
        local = solver(sub.graph)
    except HereditaryContractError:
        raise
    except Exception as exc:  # solver bugs surface as contract violations
        raise HereditaryContractError(index, solver.name, repr(exc)) from exc
    if need.name == "INOUT" and local.kind.name != "INOUT":
        local = local.as_inout(sub.graph, need.in_hops, need.out_hops)
    local = local.with_kind(need)
    report = verify_claim(sub.graph, local)
    if not report.ok:
        raise HereditaryContractError(index, solver.name, f"claim fails {need}: {report.failures[:3]}")
    return local.relabel(sub.to_old)


def step_up_out(
    g: Digraph, p: PartitionSpec | Sequence[Iterable[int]], solvers: Sequence[SubSolver], n: int
) -> ClassClaim:
    """Combine per-class OUT(n) witnesses into an OUT(n+1) witness for ``g``.

    ``solvers[0]`` must handle every induced subgraph of ``V0`` with OUT(n+1)
    claims, ``solvers[1..k-1]`` every induced subgraph of their class with
    OUT(n), and ``solvers[k]`` the class ``Vk`` itself.
    """
    spec = p if isinstance(p, PartitionSpec) else PartitionSpec.of(p)
    masks = spec.masks_for(g)
    if len(solvers) != len(masks):
        raise InputError(f"{len(masks)} classes but {len(solvers)} solvers")
    if n < 1:
        raise InputError("n must be at least 1")
    need_last, need_first = ClassKind.out(n), ClassKind.out(n + 1)

    remaining = g.all_mask
    layer_witnesses: list[int] = []
    for i in range(len(masks) - 1, 0, -1):
        part = masks[i] & remaining
        w = 0
        if part:
            w = to_mask(_run_solver(g, part, solvers[i], i, need_last).witness_a)
        layer_witnesses.append(w)
        remaining &= ~(out1_mask(g, w) | part)
    witness = 0
    if remaining:
        witness = to_mask(_run_solver(g, remaining, solvers[0], 0, need_first).witness_a)
    for w in reversed(layer_witnesses):
        witness |= w & ~out1_mask(g, witness)
    return ClassClaim(need_first, to_set(witness))


def coloring_to_out2(g: Digraph, coloring: Mapping[int, int] | Sequence[int]) -> ClassClaim:
    """OUT(2) witness from a proper colouring of the underlying undirected graph."""
    colors = dict(enumerate(coloring)) if isinstance(coloring, Sequence) else dict(coloring)
    missing = [v for v in g.vertices if v not in colors]
    if missing:
        raise InputError(f"vertices without a colour: {missing}")
    for u, v in g.edges:
        if colors[u] == colors[v]:
            raise InputError(f"improper colouring: edge ({u}, {v}) joins two vertices of colour {colors[u]}")
    palette = sorted(set(colors[v] for v in g.vertices))
    classes = [[v for v in g.vertices if colors[v] == c] for c in palette] or [[]]
    solvers = [edgeless_solver()] * len(classes)
    return step_up_out(g, classes, solvers, 1)


def step_up_inout(
    g: Digraph,
    p: PartitionSpec | Sequence[Iterable[int]],
    solvers: Sequence[SubSolver],
    m: int,
    l: int,
) -> ClassClaim:
    """Combine per-class INOUT(m, l) claims into an INOUT(m+1, l+1) claim for ``g``."""
    spec = p if isinstance(p, PartitionSpec) else PartitionSpec.of(p)
    masks = spec.masks_for(g)
    if len(solvers) != len(masks):
        raise InputError(f"{len(masks)} classes but {len(solvers)} solvers")
    if m < 1 or l < 1:
        raise InputError("m and l must be at least 1")
    need_last, need_first = ClassKind.inout(m, l), ClassKind.inout(m + 1, l + 1)

    if len(masks) == 1:
        return _run_solver(g, g.all_mask, solvers[0], 0, need_first)

    remaining = g.all_mask
    layers: list[tuple[int, int, int, int]] = []  # (X-side, Y-side, A_k, B_k) per peeled class
    for i in range(len(masks) - 1, 0, -1):
        part = masks[i] & remaining
        if part:
            c = _run_solver(g, part, solvers[i], i, need_last)
            xk, ak = to_mask(c.out_part), to_mask(c.witness_a)
            yk, bk = to_mask(c.in_part), to_mask(c.witness_b or ())
        else:
            xk = yk = ak = bk = 0
        o1 = out1_mask(g, ak) & remaining
        i1 = in1_mask(g, bk) & remaining
        x_extra = o1 & ~part
        y_extra = i1 & ~(part | o1)
        layers.append((xk | x_extra, yk | y_extra, ak, bk))
        remaining &= ~(part | o1 | i1)

    if remaining:
        c = _run_solver(g, remaining, solvers[0], 0, need_first)
        x, a = to_mask(c.out_part), to_mask(c.witness_a)
        y, b = to_mask(c.in_part), to_mask(c.witness_b or ())
    else:
        x = y = a = b = 0
    for xk, yk, ak, bk in reversed(layers):
        a_new = a | (ak & ~out1_mask(g, a))
        b_new = b | (bk & ~in1_mask(g, b))
        x, y, a, b = x | xk, y | yk, a_new, b_new
    return ClassClaim.split(need_first, to_set(x), to_set(a), to_set(y), to_set(b))


# -- tournaments and near-tournaments -----------------------------------------------


@dataclass(frozen=True)
class TournamentSplit:
    """Either a single vertex two-step dominating everything, or an IN(1)/OUT(1) split."""

    out2_witness: frozenset[int] | None = None
    v_in: frozenset[int] | None = None
    v_out: frozenset[int] | None = None
    in_witness: int | None = None
    out_witness: int | None = None

    @property
    def is_split(self) -> bool:
        return self.out2_witness is None

    def to_claim(self) -> ClassClaim:
        if self.out2_witness is not None:
            return ClassClaim(ClassKind.out(2), self.out2_witness)
        assert self.v_in is not None and self.v_out is not None
        return ClassClaim.split(
            ClassKind.inout(1, 1), self.v_out, {self.out_witness}, self.v_in, {self.in_witness}
        )


def tournament_split(g: Digraph, x: int | None = None) -> TournamentSplit:
    """Split a semicomplete digraph around ``x`` (default 0).

    If ``x`` reaches everything in two steps it alone is the OUT(2) witness.
    Otherwise with ``y`` the least vertex it misses, ``Out1(y) - {x}`` is
    dominated by ``y`` and every other vertex has an edge into ``x``.
    """
    if not is_semicomplete(g):
        raise InputError("tournament_split needs a tournament (every pair joined)")
    if g.n == 0:
        return TournamentSplit(out2_witness=frozenset())
    x = 0 if x is None else x
    g.check_vertices([x])
    reach = closure_mask(g.succ, 1 << x, 2)
    if reach == g.all_mask:
        return TournamentSplit(out2_witness=frozenset({x}))
    missed = g.all_mask & ~reach
    y = (missed & -missed).bit_length() - 1
    v_out = (g.succ[y] | 1 << y) & ~(1 << x)
    v_in = g.all_mask & ~v_out
    return TournamentSplit(v_in=to_set(v_in), v_out=to_set(v_out), in_witness=x, out_witness=y)


def kn_free_partition(g: Digraph, n: int, clique_cap: int = DEFAULT_CLIQUE_CAP) -> ClassClaim:
    """Claim for a digraph whose undirected complement has no ``n``-clique.

    ``n = 2``: OUT(2) or INOUT(1,1). ``n = 3``: INOUT(1,2) or INOUT(2,1).
    ``n > 3``: INOUT(2,2).
    """
    if n < 2:
        raise InputError("n must be at least 2")
    clique = max_clique_at_most(complement_undirected(g), n, cap=clique_cap)
    if clique is not None:
        raise CliqueFound(clique)
    return _kn_free(g, n)


def _kn_free(g: Digraph, n: int) -> ClassClaim:
    if n == 2:
        return tournament_split(g).to_claim()

    everything = g.all_mask
    a = greedy_max_independent_mask(g)
    reach_a = closure_mask(g.succ, a, 2)
    if reach_a == everything:
        kind = ClassKind.inout(1, 2) if n == 3 else ClassKind.inout(2, 2)
        return ClassClaim.split(kind, to_set(everything), to_set(a), (), ())

    c = greedy_max_independent_mask(g, reach_a)
    ell = in1_mask(g, a) & ~c
    m = out1_mask(g, c) & ~ell
    rest = everything & ~(ell | m)

    if n == 3:
        return _triangle_free_case(g, a, c, ell, m, rest)

    lm_claim = ClassClaim.split(ClassKind.inout(1, 1), to_set(m), to_set(c), to_set(ell), to_set(a))
    sub = induced_mask(g, ell | m)
    local = lm_claim.relabel(sub.to_new)
    recurse = SubSolver(f"kn-free n={n - 1}", lambda h: _as_inout22(h, _kn_free(h, n - 1)))
    return step_up_inout(g, [to_set(rest), to_set(ell | m)], [recurse, fixed_solver("L+M", local)], 1, 1)


def _as_inout22(h: Digraph, claim: ClassClaim) -> ClassClaim:
    return claim.as_inout(h, 2, 2)


def _triangle_free_case(g: Digraph, a: int, c: int, ell: int, m: int, rest: int) -> ClassClaim:
    if not rest:
        return ClassClaim.split(ClassKind.inout(1, 2), to_set(m), to_set(c), to_set(ell), to_set(a))
    sub = induced_mask(g, rest)
    split = tournament_split(sub.graph, 0)
    if not split.is_split:
        (d,) = split.out2_witness  # type: ignore[misc]
        d_old = sub.to_old[d]
        return ClassClaim.split(
            ClassKind.inout(1, 2), to_set(m | rest), to_set(c | 1 << d_old), to_set(ell), to_set(a)
        )
    assert split.v_out is not None and split.v_in is not None
    p = sub.lift_mask(to_mask(split.v_out))
    r = sub.lift_mask(to_mask(split.v_in))
    p_w = sub.to_old[split.out_witness]  # type: ignore[index]
    r_w = sub.to_old[split.in_witness]  # type: ignore[index]
    a_keep = to_mask(v for v in iter_bits(a) if not g.has_edge(v, r_w))
    return ClassClaim.split(
        ClassKind.inout(2, 1),
        to_set(m | p),
        to_set(c | 1 << p_w),
        to_set(ell | r),
        to_set(a_keep | 1 << r_w),
    )


def ab_cover(g: Digraph) -> tuple[frozenset[int], frozenset[int]]:
    """Disjoint independent ``A``, ``B`` with ``Out2(A) ∪ In2(B) = V``."""
    f0 = greedy_max_independent_mask(g)
    f1 = greedy_max_independent_mask(g, in1_mask(g, f0))
    a = f0 & in1_mask(g, f1)
    b = f1 | (f0 & ~a)
    return to_set(a), to_set(b)
