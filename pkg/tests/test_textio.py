import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasikernel.digraph import Digraph
from quasikernel.errors import ParseError
from quasikernel.ginfty import TerminatedDigraph, materialize
from quasikernel.lazyset import finite
from quasikernel.oracle import ClassKind
from quasikernel.textio import dot_export, emit_claim, emit_qdg, parse_claim, parse_qdg
from quasikernel.witnesses import LazyClaim, classify

from conftest import P3, PT4, digraphs, terminated

PT4_TEXT = "vertices 4\nterminal 0\nedge 0 1\nedge 1 2\nedge 2 3\nedge 3 1\nedge 3 0\nedge 2 0"


def test_parse_p3():
    gf = parse_qdg("vertices 3\nedge 0 1\nedge 1 2")
    assert gf.g == P3 and not gf.is_terminated


def test_parse_pt4():
    gf = parse_qdg(PT4_TEXT)
    assert gf.terminated() == PT4


def test_comments_blank_lines_and_duplicates():
    gf = parse_qdg("# a path\n\nvertices 3  # three\nedge 0 1\nedge 0 1\n  edge 1 2\n")
    assert gf.g == P3


@pytest.mark.parametrize(
    "text, line",
    [
        ("vertices 2\nedge 0 0", 2),
        ("vertices 2\nedge 0 5", 2),
        ("vertices 2\n\nterminal 3", 3),
        ("vertices 2\nedge 0", 2),
        ("vertices 2\nvertices 3", 2),
        ("vertices 2\nnode 1", 2),
        ("vertices x", 1),
        ("vertices 2\nedge -1 0", 2),
        ("edge 0 1", None),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as e:
        parse_qdg(text)
    assert e.value.line == line


def test_terminated_required():
    with pytest.raises(Exception, match="terminal"):
        parse_qdg("vertices 2").terminated()


@given(digraphs(max_n=8))
def test_round_trip_plain(g):
    assert parse_qdg(emit_qdg(g)).g == g
    assert emit_qdg(parse_qdg(emit_qdg(g)).g) == emit_qdg(g)


@given(terminated(max_n=6))
def test_round_trip_terminated(td):
    assert parse_qdg(emit_qdg(td)).terminated() == td


@given(digraphs(max_n=6), st.randoms())
def test_round_trip_shuffled_with_noise(g, rnd):
    lines = [f"edge {u} {v}" for u, v in g.edges] * 2
    rnd.shuffle(lines)
    text = "# fuzz\n" + "\n".join([f"vertices {g.n}"] + [ln + "   # dup" for ln in lines])
    assert parse_qdg(text).g == g


def test_claim_round_trip():
    for _, c in classify(PT4).claims():
        back = parse_claim(emit_claim(c))
        assert emit_claim(back) == emit_claim(c)
    c = LazyClaim(ClassKind.out(3), out_witness=finite([(2, 0)]))
    assert parse_claim("kind: OUT(3)\nout_witness: 2.0\n") == c


@pytest.mark.parametrize(
    "text",
    ["out_witness: 1.0", "kind: OUT(2)\nout_witness: (1", "kind: OUT(2)\nwitness 1.0", "kind: OUT(2)\nfoo: 1", "kind: OUT(2)"],
)
def test_claim_parse_errors(text):
    with pytest.raises(ParseError):
        parse_claim(text)


def test_dot_counts():
    text = dot_export(P3)
    assert text.count("->") == 2 and text.count("label=") == 3
    m1 = dot_export(materialize(PT4, 1))
    assert m1.count("label=") == 4
    assert 'label="0", shape=doublecircle' in m1 and 'label="3.0", shape=ellipse' in m1


def test_dot_parses():
    pydot = pytest.importorskip("pydot")
    for text in (dot_export(P3), dot_export(materialize(PT4, 2)), dot_export(Digraph(0))):
        (graph,) = pydot.graph_from_dot_data(text)
        assert graph.get_type() == "digraph"
    (graph,) = pydot.graph_from_dot_data(dot_export(materialize(PT4, 2)))
    assert len(graph.get_nodes()) == 13 and len(graph.get_edges()) == materialize(PT4, 2).digraph.edge_count()


def test_dot_deterministic():
    assert dot_export(materialize(PT4, 3)) == dot_export(materialize(TerminatedDigraph(PT4.g, PT4.terminals), 3))
