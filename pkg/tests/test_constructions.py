import itertools
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from quasikernel.constructions import (
    PartitionSpec,
    SubSolver,
    ab_cover,
    coloring_to_out2,
    edgeless_solver,
    fixed_solver,
    kn_free_partition,
    oracle_solver,
    quasi_kernel,
    quasi_kernel_solver,
    quasi_sink,
    step_up_inout,
    step_up_out,
    tournament_split,
)
from quasikernel.digraph import (
    Digraph,
    closure,
    complement_undirected,
    is_independent,
    is_tournament,
    max_clique_at_most,
)
from quasikernel.errors import CliqueFound, HereditaryContractError, InputError
from quasikernel.oracle import ClassClaim, ClassKind, all_digraphs, verify_claim, verify_cover

from conftest import C3, E3, P3, RT4, TT3, digraphs, nx_covers, to_nx, tournaments

OUT2 = ClassKind.out(2)
IN2 = ClassKind.in_(2)


class TestQuasiKernel:
    def test_goldens(self):
        assert quasi_kernel(E3) == {0, 1, 2}
        assert quasi_kernel(C3) == {1}
        assert quasi_kernel(P3) == {0, 2}
        assert quasi_kernel(Digraph(0)) == frozenset()

    def test_sink_goldens(self):
        assert quasi_sink(E3) == {0, 1, 2}
        assert verify_claim(P3, ClassClaim.single(IN2, quasi_sink(P3))).ok
        assert verify_claim(C3, ClassClaim.single(IN2, quasi_sink(C3))).ok

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exhaustive_small(self, n):
        for g in all_digraphs(n):
            assert verify_claim(g, ClassClaim.single(OUT2, quasi_kernel(g))).ok
            assert verify_claim(g, ClassClaim.single(IN2, quasi_sink(g))).ok

    @given(digraphs(max_n=12))
    def test_against_networkx(self, g):
        h = to_nx(g)
        assert nx_covers(h, quasi_kernel(g), 2, "out")
        assert nx_covers(h, quasi_sink(g), 2, "in")

    def test_long_path_no_recursion_limit(self):
        n = 5000
        g = Digraph(n, [(i, i + 1) for i in range(n - 1)])
        a = quasi_kernel(g)
        assert verify_claim(g, ClassClaim.single(OUT2, a)).ok


class TestStepUpOut:
    def test_edgeless_singletons(self):
        c = step_up_out(E3, [{0}, {1}, {2}], [edgeless_solver()] * 3, 1)
        assert c.kind == OUT2 and c.witness_a == {0, 1, 2}

    def test_c3_with_oracle_solvers(self):
        c = step_up_out(C3, [{2}, {0, 1}], [quasi_kernel_solver(), oracle_solver(ClassKind.out(1))], 1)
        assert verify_claim(C3, c).ok

    def test_two_colouring(self):
        g = Digraph(4, [(0, 1), (1, 2), (3, 2), (0, 3)])
        c = step_up_out(g, [{0, 2}, {1, 3}], [edgeless_solver()] * 2, 1)
        assert verify_claim(g, c).ok

    def test_contract_violation_names_class(self):
        bad = SubSolver("liar", lambda h: ClassClaim(ClassKind.out(1), frozenset()))
        with pytest.raises(HereditaryContractError) as e:
            step_up_out(C3, [{2}, {0, 1}], [quasi_kernel_solver(), bad], 1)
        assert e.value.class_index == 1 and e.value.solver == "liar"

    def test_bad_partition(self):
        with pytest.raises(InputError):
            step_up_out(P3, [{0, 1}, {1, 2}], [edgeless_solver()] * 2, 1)
        with pytest.raises(InputError):
            step_up_out(P3, [{0}, {1}], [edgeless_solver()] * 2, 1)
        with pytest.raises(InputError):
            PartitionSpec.of([]).masks_for(P3)

    @settings(max_examples=60)
    @given(digraphs(max_n=8), st.data())
    def test_random_partitions(self, g, data):
        k = data.draw(st.integers(1, 4))
        colour = [data.draw(st.integers(0, k - 1)) for _ in g.vertices]
        classes = [[v for v in g.vertices if colour[v] == i] for i in range(k)]
        solvers = [quasi_kernel_solver()] + [oracle_solver(ClassKind.out(1))] * (k - 1)
        try:
            c = step_up_out(g, classes, solvers, 1)
        except HereditaryContractError as e:
            # a class without OUT(1) is a legitimate refusal
            assert e.class_index >= 1
            return
        assert c.kind == OUT2 and verify_claim(g, c).ok


class TestColouring:
    def test_examples(self):
        assert verify_claim(P3, coloring_to_out2(P3, [0, 1, 0])).ok
        assert coloring_to_out2(E3, [0, 0, 0]).witness_a == {0, 1, 2}
        assert verify_claim(C3, coloring_to_out2(C3, {0: 0, 1: 1, 2: 2})).ok

    def test_improper(self):
        with pytest.raises(InputError, match=r"edge \(0, 1\)"):
            coloring_to_out2(P3, [0, 0, 1])

    @given(digraphs(max_n=9))
    def test_greedy_colouring_always_works(self, g):
        colours = {}
        for v in g.vertices:
            used = {colours[u] for u in closure(g, {v}, 1) | closure(g, {v}, 1, "in") if u in colours}
            colours[v] = min(set(range(g.n + 1)) - used)
        assert verify_claim(g, coloring_to_out2(g, colours)).ok


def _path_inout11(h: Digraph) -> ClassClaim:
    """A transitive path 0->1->..: the first vertex dominates everything."""
    return ClassClaim.split(ClassKind.inout(1, 1), h.vertices, {0} if h.n else set(), (), ())


class TestStepUpInout:
    def test_single_class_passthrough(self):
        claim = ClassClaim.split(ClassKind.inout(2, 2), {0, 1, 2}, {0}, (), ())
        c = step_up_inout(P3, [{0, 1, 2}], [fixed_solver("given", claim)], 1, 1)
        assert c == claim

    def test_two_paths(self):
        g = Digraph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        solver = oracle_solver(ClassKind.inout(1, 1))
        c = step_up_inout(g, [{0, 1, 2}, {3, 4, 5}], [solver, solver], 1, 1)
        assert c.kind == ClassKind.inout(2, 2) and verify_claim(g, c).ok

    def test_transitive_path_classes(self):
        edges = []
        blocks = [[0, 1, 2], [3, 4], [5, 6, 7]]
        for b in blocks:
            edges += [(u, v) for u, v in itertools.combinations(b, 2)]
        edges += [(2, 3), (4, 0), (7, 1), (5, 3)]
        g = Digraph(8, edges)
        solver = SubSolver("transitive path", _path_inout11)
        c = step_up_inout(g, blocks, [solver] * 3, 1, 1)
        assert verify_claim(g, c).ok

    @settings(max_examples=40)
    @given(digraphs(max_n=7), st.data())
    def test_random_partitions(self, g, data):
        k = data.draw(st.integers(1, 3))
        colour = [data.draw(st.integers(0, k - 1)) for _ in g.vertices]
        classes = [[v for v in g.vertices if colour[v] == i] for i in range(k)]
        solvers = [oracle_solver(ClassKind.inout(2, 2))] + [oracle_solver(ClassKind.inout(1, 1))] * (k - 1)
        try:
            c = step_up_inout(g, classes, solvers, 1, 1)
        except HereditaryContractError:
            return
        assert verify_claim(g, c).ok


class TestTournamentSplit:
    def test_examples(self):
        assert tournament_split(TT3, 0).out2_witness == {0}
        assert tournament_split(C3, 0).out2_witness == {0}
        s = tournament_split(RT4, 0)
        assert s.is_split
        assert (s.out_witness, s.v_out, s.v_in, s.in_witness) == (1, {1}, {0, 2, 3}, 0)
        assert verify_claim(RT4, s.to_claim()).ok

    def test_rejects_non_tournament(self):
        with pytest.raises(InputError):
            tournament_split(P3)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_exhaustive(self, n):
        pairs = list(itertools.combinations(range(n), 2))
        for bits in range(1 << len(pairs)):
            g = Digraph(n, [(u, v) if bits >> i & 1 else (v, u) for i, (u, v) in enumerate(pairs)])
            for x in range(n):
                assert verify_claim(g, tournament_split(g, x).to_claim()).ok


def _clique_free(g, n):
    return max_clique_at_most(complement_undirected(g), n) is None


class TestKnFree:
    def test_tournament_delegates(self):
        assert kn_free_partition(TT3, 2) == tournament_split(TT3).to_claim()

    def test_p3(self):
        c = kn_free_partition(P3, 3)
        assert c.kind in (ClassKind.inout(1, 2), ClassKind.inout(2, 1))
        assert verify_claim(P3, c).ok

    def test_e3(self):
        c = kn_free_partition(E3, 4)
        assert verify_claim(E3, c).ok

    def test_clique_error(self):
        with pytest.raises(CliqueFound) as e:
            kn_free_partition(E3, 3)
        assert e.value.clique == {0, 1, 2}
        with pytest.raises(InputError):
            kn_free_partition(E3, 1)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_random(self, n):
        rng = random.Random(n)
        done = 0
        while done < 60:
            size = rng.randint(1, 10)
            p = rng.choice([0.3, 0.5, 0.7, 0.9])
            g = Digraph(size, [(u, v) for u in range(size) for v in range(size) if u != v and rng.random() < p])
            if not _clique_free(g, n):
                continue
            c = kn_free_partition(g, n)
            assert verify_claim(g, c).ok, (g, c)
            expected = {2: None, 3: {ClassKind.inout(1, 2), ClassKind.inout(2, 1)}}.get(n, {ClassKind.inout(2, 2)})
            if expected:
                assert c.kind in expected
            done += 1

    @settings(max_examples=80)
    @given(digraphs(max_n=8), st.integers(2, 5))
    def test_property(self, g, n):
        assume(_clique_free(g, n))
        assert verify_claim(g, kn_free_partition(g, n)).ok


class TestAbCover:
    def test_examples(self):
        assert ab_cover(P3) == (frozenset(), {0, 2})
        assert ab_cover(E3) == (frozenset(), {0, 1, 2})
        a, b = ab_cover(C3)
        assert verify_cover(C3, a, b).ok

    @given(digraphs(max_n=12))
    def test_property(self, g):
        a, b = ab_cover(g)
        assert not (a & b)
        assert is_independent(g, a) and is_independent(g, b)
        assert closure(g, a, 2) | closure(g, b, 2, "in") == set(g.vertices)

    def test_verify_cover_detects_defects(self):
        assert not verify_cover(P3, {0}, {0}).ok
        assert not verify_cover(P3, set(), {0}).ok
        assert not verify_cover(P3, {0, 1}, set()).ok


@given(tournaments(max_n=8))
def test_tournament_split_random(g):
    assert is_tournament(g)
    assert verify_claim(g, tournament_split(g).to_claim()).ok
