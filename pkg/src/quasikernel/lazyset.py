"""Decidable vertex sets of the generated infinite graph.

Text syntax (whitespace is insignificant)::

    expr    := term (('|' | '&' | '-') term)*      left-associative
    term    := 'all' | 'none' | 'out1' '<' expr '>' | '<' expr '>' | pattern
    pattern := block ('.' block)*
    block   := INT | '{' ints '}' | '(' ints ')' '*'

``(1,2)*`` matches zero or more entries from the set, ``{3,4}`` exactly one,
a bare integer itself. A pattern made only of integers is a literal vertex,
and a union of literal vertices prints as a finite list ``1.0 | 2.0``.
``out1<X>`` is ``X`` together with every out-neighbour of ``X`` (``X`` must
be built from patterns and unions only).

Membership is only meaningful for valid vertices; callers never ask about
anything else.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from itertools import product

from .errors import ParseError
from .ginfty import SeqVertex, TerminatedDigraph, seq_str


# -- blocks ------------------------------------------------------------------------


def _fmt_ints(xs: Iterable[int]) -> str:
    return ",".join(map(str, sorted(xs)))


@dataclass(frozen=True)
class Literal:
    value: int

    def accepts(self, v: int) -> bool:
        return v == self.value

    @property
    def symbols(self) -> frozenset[int]:
        return frozenset({self.value})

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class OneOf:
    members: frozenset[int]

    def accepts(self, v: int) -> bool:
        return v in self.members

    @property
    def symbols(self) -> frozenset[int]:
        return self.members

    def __str__(self) -> str:
        return "{" + _fmt_ints(self.members) + "}"


@dataclass(frozen=True)
class Repeat:
    members: frozenset[int]

    def accepts(self, v: int) -> bool:
        return v in self.members

    @property
    def symbols(self) -> frozenset[int]:
        return self.members

    def __str__(self) -> str:
        return "(" + _fmt_ints(self.members) + ")*"


Block = Literal | OneOf | Repeat


# -- set expressions -----------------------------------------------------------------


class LazySet:
    """Base class; subclasses decide membership of a vertex sequence."""

    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        raise NotImplementedError

    def _fmt(self, nested: bool) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self._fmt(False)

    def __or__(self, other: LazySet) -> LazySet:
        return union(self, other)

    def __and__(self, other: LazySet) -> LazySet:
        return Intersection(self, other)

    def __sub__(self, other: LazySet) -> LazySet:
        return Difference(self, other)


@dataclass(frozen=True, eq=True)
class Pattern(LazySet):
    """Regular language over vertex ids given as a sequence of blocks."""

    blocks: tuple[Block, ...]

    def _closure(self, states: set[int]) -> set[int]:
        out = set(states)
        stack = list(states)
        while stack:
            p = stack.pop()
            if p < len(self.blocks) and isinstance(self.blocks[p], Repeat) and p + 1 not in out:
                out.add(p + 1)
                stack.append(p + 1)
        return out

    def start(self) -> set[int]:
        return self._closure({0})

    def step(self, states: set[int], v: int) -> set[int]:
        nxt = set()
        for p in states:
            if p < len(self.blocks) and self.blocks[p].accepts(v):
                nxt.add(p if isinstance(self.blocks[p], Repeat) else p + 1)
        return self._closure(nxt)

    def accepting(self, states: set[int]) -> bool:
        return len(self.blocks) in states

    def next_symbols(self, states: set[int]) -> set[int]:
        out: set[int] = set()
        for p in states:
            if p < len(self.blocks):
                out |= self.blocks[p].symbols
        return out

    def matches(self, s: Sequence[int]) -> bool:
        states = self.start()
        for v in s:
            states = self.step(states, v)
            if not states:
                return False
        return self.accepting(states)

    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        return self.matches(s)

    def can_finish(self, states: set[int], td: TerminatedDigraph) -> bool:
        """Is there a continuation of nonterminals then one terminal that is accepted?"""
        seen: set[frozenset[int]] = set()
        frontier = [frozenset(states)]
        while frontier:
            cur = frontier.pop()
            if cur in seen:
                continue
            seen.add(cur)
            for v in self.next_symbols(set(cur)):
                nxt = self.step(set(cur), v)
                if not nxt:
                    continue
                if td.is_terminal(v):
                    if self.accepting(nxt):
                        return True
                else:
                    frontier.append(frozenset(nxt))
        return False

    def enumerate(self, max_len: int) -> Iterator[SeqVertex]:
        """Every accepted sequence of length at most ``max_len``, by brute expansion."""

        def rec(i: int, prefix: SeqVertex) -> Iterator[SeqVertex]:
            if len(prefix) > max_len:
                return
            if i == len(self.blocks):
                yield prefix
                return
            b = self.blocks[i]
            if isinstance(b, Repeat):
                for k in range(max_len - len(prefix) + 1):
                    for chunk in product(sorted(b.members), repeat=k):
                        yield from rec(i + 1, prefix + chunk)
            else:
                for v in sorted(b.symbols):
                    yield from rec(i + 1, prefix + (v,))

        seen: set[SeqVertex] = set()
        for s in rec(0, ()):
            if s not in seen:
                seen.add(s)
                yield s

    def _fmt(self, nested: bool) -> str:
        return " . ".join(map(str, self.blocks))


@dataclass(frozen=True)
class FiniteList(LazySet):
    members: tuple[SeqVertex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(set(map(tuple, self.members)), key=lambda s: (len(s), s))))

    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        return tuple(s) in self.members

    def as_patterns(self) -> list[Pattern]:
        return [Pattern(tuple(Literal(v) for v in s)) for s in self.members]

    def _fmt(self, nested: bool) -> str:
        if not self.members:
            return "none"
        text = " | ".join(seq_str(s) for s in self.members)
        return f"<{text}>" if nested and len(self.members) > 1 else text


@dataclass(frozen=True)
class Everything(LazySet):
    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        return True

    def _fmt(self, nested: bool) -> str:
        return "all"


@dataclass(frozen=True)
class Union(LazySet):
    parts: tuple[LazySet, ...]

    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        return any(p.contains(s, td) for p in self.parts)

    def _fmt(self, nested: bool) -> str:
        text = " | ".join(p._fmt(True) for p in self.parts)
        return f"<{text}>" if nested else text


@dataclass(frozen=True)
class Intersection(LazySet):
    left: LazySet
    right: LazySet

    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        return self.left.contains(s, td) and self.right.contains(s, td)

    def _fmt(self, nested: bool) -> str:
        text = f"{self.left._fmt(True)} & {self.right._fmt(True)}"
        return f"<{text}>" if nested else text


@dataclass(frozen=True)
class Difference(LazySet):
    left: LazySet
    right: LazySet

    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        return self.left.contains(s, td) and not self.right.contains(s, td)

    def _fmt(self, nested: bool) -> str:
        text = f"{self.left._fmt(True)} - {self.right._fmt(True)}"
        return f"<{text}>" if nested else text


def _pattern_parts(x: LazySet) -> list[Pattern]:
    if isinstance(x, Pattern):
        return [x]
    if isinstance(x, FiniteList):
        return x.as_patterns()
    if isinstance(x, Union):
        return [p for part in x.parts for p in _pattern_parts(part)]
    raise TypeError(f"out1<...> needs patterns and unions only, got {type(x).__name__}")


@dataclass(frozen=True)
class OutStep(LazySet):
    """``source`` plus all its out-neighbours in the generated graph.

    An edge into ``s`` is decided at the first position ``d`` where the
    source vertex differs from ``s``; so it suffices to find, for some ``d``,
    a source vertex agreeing with ``s`` before ``d`` whose entry ``h`` at ``d``
    has an edge ``h -> s[d]`` in the base graph.
    """

    source: LazySet

    def __post_init__(self) -> None:
        _pattern_parts(self.source)

    def contains(self, s: Sequence[int], td: TerminatedDigraph) -> bool:
        if self.source.contains(s, td):
            return True
        g = td.g
        for pat in _pattern_parts(self.source):
            states = pat.start()
            for d, target in enumerate(s):
                preds = g.pred[target]
                for h in pat.next_symbols(states):
                    if h == target or not (preds >> h & 1):
                        continue
                    after = pat.step(states, h)
                    if td.is_terminal(h):
                        if pat.accepting(after):
                            return True
                    elif after and pat.can_finish(after, td):
                        return True
                states = pat.step(states, target)
                if not states:
                    break
        return False

    def _fmt(self, nested: bool) -> str:
        return f"out1<{self.source._fmt(False)}>"


ALL = Everything()
NONE = FiniteList(())


# -- constructors ----------------------------------------------------------------------


def pattern(*blocks: Block | int) -> LazySet:
    """Build a pattern; bare ints become literals and all-literal patterns become a finite list."""
    bs = tuple(Literal(b) if isinstance(b, int) else b for b in blocks)
    bs = tuple(b for b in bs if not (isinstance(b, Repeat) and not b.members))
    if not bs or any(isinstance(b, OneOf) and not b.members for b in bs):
        return NONE  # the empty word is never a vertex
    bs = tuple(Literal(next(iter(b.members))) if isinstance(b, OneOf) and len(b.members) == 1 else b for b in bs)
    if all(isinstance(b, Literal) for b in bs):
        return FiniteList((tuple(b.value for b in bs),))  # type: ignore[union-attr]
    return Pattern(bs)


def finite(seqs: Iterable[Sequence[int]]) -> FiniteList:
    return FiniteList(tuple(tuple(s) for s in seqs))


def repeat(xs: Iterable[int]) -> Repeat:
    return Repeat(frozenset(xs))


def one_of(xs: Iterable[int]) -> OneOf:
    return OneOf(frozenset(xs))


def union(*parts: LazySet) -> LazySet:
    flat: list[LazySet] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Union) else [p])
    if flat and all(isinstance(p, FiniteList) for p in flat):
        return FiniteList(tuple(s for p in flat for s in p.members))  # type: ignore[attr-defined]
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(flat))


# -- parsing ----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(out1|all|none)|([.{}(),*|&<>-]))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:pos + 10]!r} in set expression")
        tokens.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'more input'}, found {tok or 'end of input'}")
        self.i += 1
        return tok

    def expr(self) -> LazySet:
        left = self.term()
        while self.peek() in ("|", "&", "-"):
            op = self.take()
            right = self.term()
            if op == "|":
                left = union(left, right)
            elif op == "&":
                left = Intersection(left, right)
            else:
                left = Difference(left, right)
        return left

    def term(self) -> LazySet:
        tok = self.peek()
        if tok == "all":
            self.take()
            return ALL
        if tok == "none":
            self.take()
            return NONE
        if tok == "out1":
            self.take()
            self.take("<")
            inner = self.expr()
            self.take(">")
            return OutStep(inner)
        if tok == "<":
            self.take()
            inner = self.expr()
            self.take(">")
            return inner
        return self.pattern()

    def ints(self, close: str) -> frozenset[int]:
        xs = []
        while self.peek() != close:
            xs.append(int(self.take()))
            if self.peek() == ",":
                self.take()
        self.take(close)
        return frozenset(xs)

    def block(self) -> Block:
        tok = self.take()
        if tok.isdigit():
            return Literal(int(tok))
        if tok == "{":
            return OneOf(self.ints("}"))
        if tok == "(":
            members = self.ints(")")
            self.take("*")
            return Repeat(members)
        raise ParseError(f"unexpected token {tok!r}")

    def pattern(self) -> LazySet:
        blocks = [self.block()]
        while self.peek() == ".":
            self.take()
            blocks.append(self.block())
        return pattern(*blocks)


def parse_lazyset(text: str) -> LazySet:
    p = _Parser(text)
    result = p.expr()
    if p.peek() is not None:
        raise ParseError(f"trailing input at {p.peek()!r}")
    return result
