"""Command-line interface.

Exit codes: 0 success, 1 verification failed or class absent, 2 usage or
parse error, 3 cap refusal. Output is ``key: value`` lines.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Iterable, Sequence

from .constructions import ab_cover, kn_free_partition, quasi_kernel, quasi_sink, tournament_split
from .digraph import condensation, is_semicomplete, is_tournament
from .errors import CapExceeded, CliqueFound, InputError, QuasiKernelError
from .ginfty import DEFAULT_MATERIALIZE_CAP, materialize
from .oracle import ClassClaim, ClassKind, decide_class, verify_claim, verify_cover
from .textio import GraphFile, dot_export, emit_qdg, parse_claim, read_qdg
from .tournaments import t3_prefix
from .witnesses import classify, verify_truncated

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

Out = Callable[[str], None]


def _fmt(s: Iterable[int]) -> str:
    return "{" + ",".join(map(str, sorted(s))) + "}"


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _rows(out: Out, rows: Iterable[tuple[str, str]], prefix: str = "") -> None:
    for k, v in rows:
        out(f"{prefix}{k}: {v}")


def _load(path: str) -> GraphFile:
    return read_qdg(path)


# -- commands ---------------------------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace, out: Out) -> int:
    gf = _load(args.file)
    g = gf.g
    out(f"vertices: {g.n}")
    out(f"edges: {g.edge_count()}")
    if gf.terminals is not None:
        out(f"terminals: {_fmt(gf.terminals)}")
    out(f"tournament: {_yn(is_tournament(g))}")
    out(f"semicomplete: {_yn(is_semicomplete(g))}")
    cond = condensation(g)
    out(f"condensation_classes: {len(cond.classes)}")
    out(f"condensation_total_order: {_yn(cond.is_total_order)}")
    last = "none" if cond.last_class is None else _fmt(cond.classes[cond.last_class])
    out(f"condensation_last_class: {last}")

    ok = True
    qk, qs = quasi_kernel(g), quasi_sink(g)
    for name, claim in (("quasi_kernel", ClassClaim.single(ClassKind.out(2), qk)),
                        ("quasi_sink", ClassClaim.single(ClassKind.in_(2), qs))):
        rep = verify_claim(g, claim)
        ok &= rep.ok
        out(f"{name}: {_fmt(claim.witness_a)}")
        out(f"{name}_verified: {_yn(rep.ok)}")
    a, b = ab_cover(g)
    rep = verify_cover(g, a, b)
    ok &= rep.ok
    out(f"ab_cover_a: {_fmt(a)}")
    out(f"ab_cover_b: {_fmt(b)}")
    out(f"ab_cover_verified: {_yn(rep.ok)}")

    kinds = [ClassKind.out(i) for i in (1, 2, 3)] + [ClassKind.in_(i) for i in (1, 2, 3)]
    kinds.append(ClassKind.inout(2, 2))
    for kind in kinds:
        try:
            c = decide_class(g, kind, args.max_vertices)
        except CapExceeded:
            out(f"oracle {kind}: skipped (over cap)")
            continue
        if c is None:
            out(f"oracle {kind}: absent")
        elif kind.name == "INOUT":
            out(f"oracle {kind}: present out_part={_fmt(c.out_part)} in_part={_fmt(c.in_part)}")
        else:
            out(f"oracle {kind}: present {_fmt(c.witness_a)}")
    return EXIT_OK if ok else EXIT_FAIL


def _single(fn: Callable, kind: ClassKind) -> Callable[[argparse.Namespace, Out], int]:
    def run(args: argparse.Namespace, out: Out) -> int:
        g = _load(args.file).g
        w = fn(g)
        out(_fmt(w))
        return EXIT_OK if verify_claim(g, ClassClaim.single(kind, w)).ok else EXIT_FAIL

    return run


def cmd_decide(args: argparse.Namespace, out: Out) -> int:
    g = _load(args.file).g
    kind = ClassKind.parse(args.klass)
    c = decide_class(g, kind, args.max_vertices)
    if c is None:
        out(f"class: {kind}")
        out("verdict: absent")
        return EXIT_FAIL
    out("verdict: present")
    _rows(out, c.describe())
    return EXIT_OK


def cmd_split(args: argparse.Namespace, out: Out) -> int:
    g = _load(args.file).g
    sp = tournament_split(g, args.x)
    c = sp.to_claim()
    out(f"split: {_yn(sp.is_split)}")
    _rows(out, c.describe())
    return EXIT_OK if verify_claim(g, c).ok else EXIT_FAIL


def cmd_knfree(args: argparse.Namespace, out: Out) -> int:
    g = _load(args.file).g
    try:
        c = kn_free_partition(g, args.n, args.max_clique)
    except CliqueFound as e:
        out(f"clique: {_fmt(e.clique)}")
        return EXIT_FAIL
    _rows(out, c.describe())
    rep = verify_claim(g, c)
    out(f"verified: {_yn(rep.ok)}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_abcover(args: argparse.Namespace, out: Out) -> int:
    g = _load(args.file).g
    a, b = ab_cover(g)
    out(f"a: {_fmt(a)}")
    out(f"b: {_fmt(b)}")
    return EXIT_OK if verify_cover(g, a, b).ok else EXIT_FAIL


def cmd_classify(args: argparse.Namespace, out: Out) -> int:
    td = _load(args.file).terminated()
    r = classify(td)
    out(f"cond_iii: {_yn(r.cond_iii)}")
    if r.violator is not None:
        out(f"cond_iii_violator: {r.violator}")
    out(f"out3: {'present' if r.out3 else 'absent'}")
    if r.out3:
        _rows(out, r.out3.describe(), "out3.")
    out(f"out2: {r.out2.status}")
    out(f"out2.reason: {r.out2.reason}")
    if r.out2.claim:
        _rows(out, r.out2.claim.describe(), "out2.")
    if r.tinf_hom is not None:
        out(f"tinf_hom: phi(s) = min{{n : s[n] != {r.tinf_hom.v}}}")
    _rows(out, r.inout22.describe(), "inout22.")
    return EXIT_OK


def cmd_materialize(args: argparse.Namespace, out: Out) -> int:
    td = _load(args.file).terminated()
    m = materialize(td, args.depth, args.max_materialize)
    out(f"depth: {m.depth}")
    out(f"vertices: {m.digraph.n}")
    out(f"edges: {m.digraph.edge_count()}")
    if args.dot:
        text = dot_export(m)
        if args.dot == "-":
            sys.stdout.write(text)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(text)
            out(f"dot: {args.dot}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: Out) -> int:
    td = _load(args.file).terminated()
    if args.claim:
        with open(args.claim, encoding="utf-8") as fh:
            claims = [("claim", parse_claim(fh.read()))]
    else:
        claims = classify(td).claims()
    ok = True
    for name, c in claims:
        rep = verify_truncated(td, c, args.depth, args.margin, args.max_materialize)
        ok &= rep.ok
        out(f"{name}: {str(c.kind)} {'ok' if rep.ok else 'FAILED'}")
        for where, why in rep.failures[:10]:
            out(f"{name}.failure: {where}: {why}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gen(args: argparse.Namespace, out: Out) -> int:
    sys.stdout.write(emit_qdg(t3_prefix(args.size)))
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasikernel", description="Quasi-kernel toolkit for finite and generated infinite digraphs.")
    p.add_argument("--max-vertices", type=int, default=None, help="vertex cap for exhaustive oracle searches")
    p.add_argument("--max-materialize", type=int, default=DEFAULT_MATERIALIZE_CAP, help="vertex cap for materializations")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        return sp

    add("analyze", cmd_analyze, "summary of a digraph").add_argument("file")
    add("qk", _single(quasi_kernel, ClassKind.out(2)), "a quasi-kernel").add_argument("file")
    add("qs", _single(quasi_sink, ClassKind.in_(2)), "a quasi-sink").add_argument("file")
    d = add("decide", cmd_decide, "exhaustive class decision")
    d.add_argument("file")
    d.add_argument("--class", dest="klass", required=True, help="e.g. out2, in3, inout22")
    s = add("split", cmd_split, "tournament split")
    s.add_argument("file")
    s.add_argument("--x", type=int, default=None)
    k = add("knfree", cmd_knfree, "claim for a digraph with clique-free complement")
    k.add_argument("file")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--max-clique", type=int, default=20)
    add("abcover", cmd_abcover, "two-sided independent cover").add_argument("file")

    gi = sub.add_parser("ginfty", help="the generated infinite graph")
    gsub = gi.add_subparsers(dest="gcommand", required=True)
    c = gsub.add_parser("classify")
    c.set_defaults(fn=cmd_classify)
    c.add_argument("file")
    m = gsub.add_parser("materialize")
    m.set_defaults(fn=cmd_materialize)
    m.add_argument("file")
    m.add_argument("--depth", type=int, required=True)
    m.add_argument("--dot", default=None, help="write DOT to this path ('-' for stdout)")
    v = gsub.add_parser("verify")
    v.set_defaults(fn=cmd_verify)
    v.add_argument("file")
    v.add_argument("--depth", type=int, required=True)
    v.add_argument("--margin", type=int, default=2)
    v.add_argument("--claim", default=None, help="claim file to replay instead of the built-in claims")

    gen = add("gen", cmd_gen, "emit a standard graph")
    gen.add_argument("--target", choices=["t3"], required=True)
    gen.add_argument("--size", type=int, required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    def out(line: str) -> None:
        print(line)

    try:
        return args.fn(args, out)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except QuasiKernelError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
