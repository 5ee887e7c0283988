"""The ``.qdg`` graph format, claim files, and DOT export.

``.qdg`` grammar, one directive per line, ``#`` starts a comment::

    vertices <n>
    edge <u> <v>
    terminal <v>

Any ``terminal`` line makes the file a terminated digraph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph
from .errors import InputError, ParseError
from .ginfty import Materialization, TerminatedDigraph, seq_str
from .lazyset import parse_lazyset
from .oracle import ClassKind
from .witnesses import LazyClaim


@dataclass(frozen=True)
class GraphFile:
    g: Digraph
    terminals: frozenset[int] | None = None
    source: str = "<text>"

    @property
    def is_terminated(self) -> bool:
        return self.terminals is not None

    def terminated(self) -> TerminatedDigraph:
        if self.terminals is None:
            raise InputError(f"{self.source}: no terminal lines, not a terminated digraph")
        return TerminatedDigraph(self.g, self.terminals)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _int(tok: str, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None
    if v < 0:
        raise ParseError(f"negative id {v}", lineno)
    return v


def parse_qdg(text: str, source: str = "<text>") -> GraphFile:
    n: int | None = None
    edges: list[tuple[int, int, int]] = []
    terminals: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        word, *args = line.split()
        if word == "vertices":
            if len(args) != 1:
                raise ParseError("usage: vertices <n>", lineno)
            if n is not None:
                raise ParseError("second vertices line", lineno)
            n = _int(args[0], lineno)
        elif word == "edge":
            if len(args) != 2:
                raise ParseError("usage: edge <u> <v>", lineno)
            u, v = (_int(a, lineno) for a in args)
            if u == v:
                raise ParseError(f"loop edge at {u}", lineno)
            edges.append((lineno, u, v))
        elif word == "terminal":
            if len(args) != 1:
                raise ParseError("usage: terminal <v>", lineno)
            terminals.append((lineno, _int(args[0], lineno)))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    if n is None:
        raise ParseError("missing 'vertices <n>' line")
    for lineno, u, v in edges:
        if u >= n or v >= n:
            raise ParseError(f"edge {u} {v} out of range 0..{n - 1}", lineno)
    for lineno, t in terminals:
        if t >= n:
            raise ParseError(f"terminal {t} out of range 0..{n - 1}", lineno)
    g = Digraph(n, ((u, v) for _, u, v in edges))
    ts = frozenset(t for _, t in terminals) if terminals else None
    return GraphFile(g, ts, source)


def read_qdg(path: str) -> GraphFile:
    with open(path, encoding="utf-8") as fh:
        return parse_qdg(fh.read(), path)


def emit_qdg(g: Digraph | TerminatedDigraph) -> str:
    if isinstance(g, TerminatedDigraph):
        base, ts = g.g, sorted(g.terminals)
    else:
        base, ts = g, []
    lines = [f"vertices {base.n}"]
    lines += [f"terminal {t}" for t in ts]
    lines += [f"edge {u} {v}" for u, v in base.edges]
    return "\n".join(lines) + "\n"


# -- claim files ----------------------------------------------------------------------------

_CLAIM_KEYS = ("out_witness", "in_witness", "out_part", "in_part")


def emit_claim(c: LazyClaim) -> str:
    return "".join(f"{k}: {v}\n" for k, v in c.describe())


def parse_claim(text: str) -> LazyClaim:
    fields: dict[str, object] = {}
    kind = None
    note = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ParseError("expected 'key: value'", lineno)
        try:
            if key == "kind":
                kind = ClassKind.parse(value)
            elif key in _CLAIM_KEYS:
                fields[key] = parse_lazyset(value)
            elif key == "note":
                note = value
            else:
                raise ParseError(f"unknown key {key!r}", lineno)
        except ParseError as e:
            if e.line is None:
                raise ParseError(str(e), lineno) from None
            raise
        except InputError as e:
            raise ParseError(str(e), lineno) from None
    if kind is None:
        raise ParseError("missing 'kind:' line")
    try:
        return LazyClaim(kind, note=note, **fields)  # type: ignore[arg-type]
    except InputError as e:
        raise ParseError(str(e)) from None


# -- DOT ------------------------------------------------------------------------------------------


def dot_export(x: Materialization | Digraph, name: str = "G") -> str:
    if isinstance(x, Materialization):
        g = x.digraph
        labels = [seq_str(s) for s in x.labels]
        shapes = ["doublecircle" if len(s) == 1 else "ellipse" for s in x.labels]
    else:
        g = x
        labels = [str(v) for v in g.vertices]
        shapes = ["circle"] * g.n
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        lines.append(f'  {v} [label="{labels[v]}", shape={shapes[v]}];')
    for u, v in g.edges:
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
