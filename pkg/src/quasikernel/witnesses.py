"""Predicate-form witnesses for the generated infinite graph, and their finite certification."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal as Lit

from .constructions import quasi_kernel, quasi_kernel_mask
from .digraph import (
    closure_mask,
    in1_mask,
    is_tournament,
    iter_bits,
    out1_mask,
    to_mask,
    to_set,
)
from .errors import InputError, WitnessExists
from .ginfty import (
    DEFAULT_MATERIALIZE_CAP,
    Materialization,
    SeqVertex,
    TerminatedDigraph,
    materialize,
    seq_str,
)
from .lazyset import (
    ALL,
    NONE,
    LazySet,
    OutStep,
    finite,
    one_of,
    pattern,
    repeat,
    union,
)
from .oracle import ClassKind, VerifyReport
from .tournaments import LevelMap, TargetKind, check_hom

OUT2 = ClassKind.out(2)
IN2 = ClassKind.in_(2)
INOUT22 = ClassKind.inout(2, 2)


@dataclass(frozen=True)
class LazyClaim:
    """Class claim whose sets are predicates on sequences.

    ``out_witness`` serves ``OUT`` claims and the out-part of ``INOUT``
    claims; ``in_witness`` serves ``IN`` claims and the in-part. Parts
    default to everything for single-sided claims.
    """

    kind: ClassKind
    out_witness: LazySet | None = None
    in_witness: LazySet | None = None
    out_part: LazySet | None = None
    in_part: LazySet | None = None
    note: str = ""

    def __post_init__(self) -> None:
        k = self.kind.name
        if k == "OUT" and self.out_witness is None:
            raise InputError("OUT claim needs an out-witness")
        if k == "IN" and self.in_witness is None:
            raise InputError("IN claim needs an in-witness")
        if k == "INOUT" and None in (self.out_witness, self.in_witness, self.out_part, self.in_part):
            raise InputError("INOUT claim needs both witnesses and both parts")

    def as_inout22(self) -> LazyClaim:
        """View an OUT(2)/IN(2) claim as INOUT(2,2) with one empty part."""
        if self.kind == OUT2:
            return LazyClaim(INOUT22, self.out_witness, NONE, ALL, NONE, self.note)
        if self.kind == IN2:
            return LazyClaim(INOUT22, NONE, self.in_witness, NONE, ALL, self.note)
        if self.kind == INOUT22:
            return self
        raise InputError(f"cannot view {self.kind} as INOUT(2,2)")

    def describe(self) -> list[tuple[str, str]]:
        rows = [("kind", str(self.kind))]
        for name in ("out_witness", "in_witness", "out_part", "in_part"):
            val = getattr(self, name)
            if val is not None:
                rows.append((name, str(val)))
        if self.note:
            rows.append(("note", self.note))
        return rows


# -- condition (iii), OUT(3), and the T_inf homomorphism ------------------------------


def check_cond_iii(td: TerminatedDigraph) -> tuple[bool, int | None]:
    """Does every nonterminal have an in-neighbour? Returns the least violator otherwise."""
    for v in sorted(td.nonterminals):
        if not td.g.pred[v]:
            return False, v
    return True, None


def out3_witness(td: TerminatedDigraph) -> LazyClaim:
    ok, v = check_cond_iii(td)
    if not ok:
        raise InputError(f"nonterminal {v} has no in-neighbour; use tinf_hom instead")
    a = quasi_kernel(td.g)
    return LazyClaim(ClassKind.out(3), out_witness=finite(td.ext(x) for x in sorted(a)), note="ext of a quasi-kernel")


@dataclass(frozen=True)
class LevelFunction:
    """``s -> min{n : s[n] != v}``, a level map onto the reverse-ordered naturals."""

    v: int

    def __call__(self, s: Sequence[int]) -> int:
        for i, x in enumerate(s):
            if x != self.v:
                return i
        raise InputError(f"{seq_str(s)} consists only of {self.v}")

    def level_map(self, m: Materialization) -> LevelMap:
        return LevelMap(("phi", self.v), {i: self(s) for i, s in enumerate(m.labels)})

    def check(self, m: Materialization):
        return check_hom(m.digraph, self.level_map(m), TargetKind.T_INF)


def tinf_hom(td: TerminatedDigraph, v: int) -> LevelFunction:
    if v not in td.nonterminals:
        raise InputError(f"{v} is not a nonterminal")
    if td.g.pred[v]:
        raise InputError(f"nonterminal {v} has in-neighbours {sorted(iter_bits(td.g.pred[v]))}")
    return LevelFunction(v)


# -- OUT(2) for tournaments -----------------------------------------------------------------


def _require_tournament(td: TerminatedDigraph) -> None:
    if not is_tournament(td.g):
        raise InputError("the OUT(2) criterion is only available for tournaments")


def out2_decision_tournament(td: TerminatedDigraph) -> SeqVertex | None:
    """``(v,)`` for the least terminal ``v`` with ``Out2(v) = V``, else ``None``."""
    _require_tournament(td)
    g = td.g
    for v in sorted(td.terminals):
        if closure_mask(g.succ, 1 << v, 2) == g.all_mask:
            return (v,)
    return None


def out2_refuter(td: TerminatedDigraph, s: Sequence[int]) -> SeqVertex:
    """A vertex not reachable from ``s`` in at most two steps."""
    _require_tournament(td)
    s = td.check_seq(s)
    reach = closure_mask(td.g.succ, 1 << s[-1], 2)
    missing = td.g.all_mask & ~reach
    if not missing:
        raise WitnessExists(f"Out2({s[-1]}) is everything: a witness exists")
    w = (missing & -missing).bit_length() - 1
    return s[:-1] + td.ext(w)


def certify_refutation(td: TerminatedDigraph, s: Sequence[int], y: Sequence[int], cap: int = DEFAULT_MATERIALIZE_CAP) -> bool:
    """Two-step BFS from ``s`` in a deep enough truncation misses ``y``."""
    m = materialize(td, len(s) + 2, cap)
    reach = closure_mask(m.digraph.succ, 1 << m.id_of(s), 2)
    return not (reach >> m.id_of(y) & 1)


# -- nonterminals independent -------------------------------------------------------------------


def _least(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _ids(mask: int) -> list[int]:
    return sorted(iter_bits(mask))


def _quasi_kernel_with_terminal(td: TerminatedDigraph, t: int) -> frozenset[int]:
    """Quasi-kernel of ``td.g`` meeting the terminals, built around ``t`` (which has no in-neighbour in N)."""
    g = td.g
    b = out1_mask(g, 1 << t)
    a_prime = quasi_kernel_mask(g, within=g.all_mask & ~b)
    if g.adj[t] & a_prime:
        return to_set(a_prime)
    return to_set(a_prime | 1 << t)


def n_independent_witness(td: TerminatedDigraph) -> LazyClaim:
    """OUT(2) or IN(2) claim when the nonterminals form an independent set."""
    g = td.g
    n_mask, t_mask = td.nonterminal_mask, td.terminal_mask
    if any(g.adj[v] & n_mask for v in iter_bits(n_mask)):
        raise InputError("nonterminals are not independent")
    t0 = td.least_terminal

    # (I) fails
    for reverse, kind, nbhd in ((False, OUT2, out1_mask), (True, IN2, in1_mask)):
        loose = t_mask & ~nbhd(g, n_mask)
        if loose:
            t = _least(loose)
            host = td.reversed() if reverse else td
            a = to_mask(_quasi_kernel_with_terminal(host, t))
            k = pattern(repeat(_ids(a & n_mask)), one_of(_ids(a & t_mask)))
            label = "terminal outside In1(N)" if reverse else "terminal outside Out1(N)"
            return _claim1(kind, k, f"{label}: {t}")

    # (I) holds, (II) fails
    if n_mask & ~in1_mask(g, t_mask) == 0:
        return _claim1(IN2, pattern(one_of(_ids(n_mask)), t0), "N inside In1(T)")
    if n_mask & ~out1_mask(g, t_mask) == 0:
        return _claim1(OUT2, pattern(one_of(_ids(n_mask)), t0), "N inside Out1(T)")

    a = n_mask & ~out1_mask(g, t_mask)
    k = pattern(repeat(_ids(a)), one_of(_ids(n_mask & ~a)), t0)
    return _claim1(OUT2, k, "properties (I) and (II) hold")


def _claim1(kind: ClassKind, k: LazySet, note: str) -> LazyClaim:
    if kind.name == "OUT":
        return LazyClaim(kind, out_witness=k, note=note)
    return LazyClaim(kind, in_witness=k, note=note)


# -- INOUT(2,2) ------------------------------------------------------------------------------


@dataclass(frozen=True)
class InoutContext:
    """Every named set of the construction around a nonterminal edge ``x -> y``."""

    x: int
    y: int
    a: frozenset[int]
    b: frozenset[int]
    k0: LazySet
    k1: LazySet
    k: LazySet
    l: LazySet
    v0: LazySet
    r: LazySet
    s: LazySet
    r_prime: LazySet
    s_prime: LazySet
    claim: LazyClaim = field(repr=False)


def least_nonterminal_edge(td: TerminatedDigraph) -> tuple[int, int] | None:
    n_mask = td.nonterminal_mask
    for u in sorted(td.nonterminals):
        hit = td.g.succ[u] & n_mask
        if hit:
            return u, _least(hit)
    return None


def inout22_context(td: TerminatedDigraph) -> InoutContext:
    edge = least_nonterminal_edge(td)
    if edge is None:
        raise InputError("no edge between nonterminals")
    x, y = edge
    g = td.g
    xy = 1 << x | 1 << y
    a_mask = in1_mask(g, xy) | out1_mask(g, xy)
    b_mask = quasi_kernel_mask(g, within=g.all_mask & ~a_mask)
    bn, bt = _ids(b_mask & td.nonterminal_mask), _ids(b_mask & td.terminal_mask)
    t0 = td.least_terminal
    star = repeat(bn)

    k0 = pattern(star, x, t0)
    k1 = pattern(star, one_of(bt)) if bt else NONE
    k = union(k0, k1) if bt else k0
    l = pattern(star, y, t0)
    v0 = pattern(star, one_of(_ids(a_mask)), repeat(g.vertices))
    r = union(k0, pattern(star, y, x, t0))
    s = union(l, pattern(star, x, y, t0))
    r_prime = (OutStep(r) & v0) - s
    s_prime = v0 - r_prime
    claim = LazyClaim(INOUT22, k, l, ALL - s_prime, s_prime, f"nonterminal edge {x}->{y}")
    return InoutContext(x, y, to_set(a_mask), to_set(b_mask), k0, k1, k, l, v0, r, s, r_prime, s_prime, claim)


def inout22_witness(td: TerminatedDigraph) -> LazyClaim:
    if least_nonterminal_edge(td) is None:
        return n_independent_witness(td).as_inout22()
    return inout22_context(td).claim


def r_prime_membership(ctx: InoutContext, td: TerminatedDigraph, s: Sequence[int]) -> bool:
    s = td.check_seq(s)
    if not ctx.v0.contains(s, td):
        raise InputError(f"{seq_str(s)} is outside V0")
    return ctx.r_prime.contains(s, td)


# -- finite certification ------------------------------------------------------------------------


def _side_failures(
    m: Materialization, part: int, witness: int, hops: int, nbrs: tuple[int, ...], label: str, depth: int
) -> list[tuple[object, str]]:
    g = m.digraph
    out: list[tuple[object, str]] = []
    for v in iter_bits(witness & ~part):
        out.append((v, f"{label} witness member outside its part"))
    w = witness & part
    for v in iter_bits(w):
        for u in iter_bits(g.succ[v] & w):
            out.append((v, f"{label} witness not independent: edge to {seq_str(m.labels[u])}"))
    covered = closure_mask(nbrs, w, hops, within=part)
    for v in iter_bits(part & m.depth_mask(depth) & ~covered):
        out.append((v, f"uncovered by the {label} witness within {hops} steps"))
    return out


def verify_truncated(
    td: TerminatedDigraph,
    claim: LazyClaim,
    depth: int,
    margin: int = 2,
    cap: int = DEFAULT_MATERIALIZE_CAP,
) -> VerifyReport:
    """Check ``claim`` on the truncation of depth ``depth + margin``.

    Coverage is demanded for vertices of depth at most ``depth``; deeper
    vertices only serve as path intermediates and witness members.
    Failures are keyed by dotted sequences, in id order.
    """
    if depth < 0 or margin < 0:
        raise InputError("depth and margin must be non-negative")
    m = materialize(td, depth + margin, cap)
    g = m.digraph

    def mask(x: LazySet | None) -> int:
        if x is None:
            return g.all_mask
        return m.mask_where(lambda s: x.contains(s, td))

    kind = claim.kind
    failures: list[tuple[object, str]] = []
    if kind.name == "OUT":
        failures += _side_failures(m, mask(claim.out_part), mask(claim.out_witness), kind.n, g.succ, "out", depth)
    elif kind.name == "IN":
        failures += _side_failures(m, mask(claim.in_part), mask(claim.in_witness), kind.n, g.pred, "in", depth)
    else:
        po, pi = mask(claim.out_part), mask(claim.in_part)
        for v in iter_bits(po & pi):
            failures.append((v, "partition defect: in both parts"))
        for v in iter_bits(g.all_mask & ~(po | pi)):
            failures.append((v, "partition defect: in neither part"))
        failures += _side_failures(m, po, mask(claim.out_witness), kind.out_hops, g.succ, "out", depth)
        failures += _side_failures(m, pi, mask(claim.in_witness), kind.in_hops, g.pred, "in", depth)
    failures.sort(key=lambda f: f[0])
    return VerifyReport.from_failures((seq_str(m.labels[v]), why) for v, why in failures)


# -- classification ------------------------------------------------------------------------------------

Out2Status = Lit["yes", "no", "unknown"]


@dataclass(frozen=True)
class Out2Verdict:
    status: Out2Status
    claim: LazyClaim | None = None
    reason: str = ""


@dataclass(frozen=True)
class GInfReport:
    cond_iii: bool
    violator: int | None
    out3: LazyClaim | None
    out2: Out2Verdict
    tinf_hom: LevelFunction | None
    inout22: LazyClaim

    def claims(self) -> list[tuple[str, LazyClaim]]:
        out = []
        if self.out3 is not None:
            out.append(("out3", self.out3))
        if self.out2.claim is not None:
            out.append(("out2", self.out2.claim))
        out.append(("inout22", self.inout22))
        return out


def _out2_verdict(td: TerminatedDigraph, cond: bool) -> Out2Verdict:
    if is_tournament(td.g):
        w = out2_decision_tournament(td)
        if w is not None:
            return Out2Verdict("yes", LazyClaim(OUT2, out_witness=finite([w])), f"Out2({w[0]}) = V")
        return Out2Verdict("no", None, "no terminal v with Out2(v) = V; refute with out2_refuter")
    if not any(td.g.adj[v] & td.nonterminal_mask for v in td.nonterminals):
        c = n_independent_witness(td)
        if c.kind == OUT2:
            return Out2Verdict("yes", c, c.note)
    return Out2Verdict("unknown", None, "not a tournament")


def classify(td: TerminatedDigraph) -> GInfReport:
    cond, violator = check_cond_iii(td)
    out3 = out3_witness(td) if cond else None
    hom = None if cond else tinf_hom(td, violator)  # type: ignore[arg-type]
    return GInfReport(cond, violator, out3, _out2_verdict(td, cond), hom, inout22_witness(td))

