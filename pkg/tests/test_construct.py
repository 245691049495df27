import itertools
import random

import pytest

from conftest import (
    all_simple_cycles,
    complete_graph,
    cycle_graph,
    k33_graph,
    perm_hamiltonian_path,
)
from ic_cycles.errors import PreconditionViolatedError, ProofGapError
from ic_cycles.extremal import extremal_graph
from ic_cycles.graph import VertexCycle, VertexPath, build_graph, is_ic_cycle
from ic_cycles.harness import enumerate_graphs
from ic_cycles.oracle import Outcome, find_ic_cycle_exact, has_hamiltonian_path_between
from ic_cycles.construct import (
    BridgePair,
    CyclePathPartition,
    PathState,
    SubpathState,
    Trace,
    _claim5_splice,
    bootstrap_partition,
    case2_pipeline,
    claim1_apply_move,
    claim1_find_move,
    claim1_hamiltonian_path,
    claim4_hamiltonian_cycle_H,
    claim5_hamiltonian_path_pq,
    construct_ic_cycle,
    improve_partition,
    lemma1_close_path,
    rotation_sets,
    select_bridge_pair,
    validate_trace,
)


def is_path_in(g, order):
    return (len(set(order)) == len(order)
            and all(g.adj[order[i]] >> order[i + 1] & 1
                    for i in range(len(order) - 1)))


class TestLemma1:
    def test_endpoints_adjacent(self):
        g = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        c = lemma1_close_path(g, [0, 1, 2, 3])
        assert c.order == (0, 1, 2, 3)

    def test_crossing_chords(self):
        g = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)])
        c = lemma1_close_path(g, [0, 1, 2, 3])
        # derived expectation: enumerate every 4-cycle of that graph
        four_cycles = {frozenset((a, b, c_, d))
                       for (a, b, c_, d) in
                       (cyc for cyc in all_simple_cycles(g) if len(cyc) == 4)}
        assert c.order == (0, 1, 3, 2)
        assert frozenset(c.order) in four_cycles
        assert is_ic_cycle(g, c)

    def test_triangle(self):
        g = complete_graph(3)
        assert lemma1_close_path(g, [0, 1, 2]).order == (0, 1, 2)

    def test_too_short(self):
        with pytest.raises(PreconditionViolatedError):
            lemma1_close_path(complete_graph(3), [0, 1])

    def test_degree_sum_too_small(self):
        g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
        with pytest.raises(PreconditionViolatedError):
            lemma1_close_path(g, [0, 1, 2, 3])

    def test_random_spanning_instances(self):
        rng = random.Random(20240811)
        for _ in range(500):
            n = rng.randint(3, 16)
            order = list(range(n))
            rng.shuffle(order)
            edges = {(min(a, b), max(a, b))
                     for a, b in zip(order, order[1:])}
            p = rng.uniform(0.2, 0.9)
            for u, v in itertools.combinations(range(n), 2):
                if rng.random() < p:
                    edges.add((u, v))
            g = build_graph(n, edges)
            if g.degree(order[0]) + g.degree(order[-1]) < n:
                continue
            c = lemma1_close_path(g, order)
            assert len(c) == n
            assert set(c.order) == set(order)
            assert is_ic_cycle(g, c)


class TestClaim1Moves:
    def test_close_endpoints(self):
        g = cycle_graph(5)
        state = PathState(g, (0, 1, 2, 3, 4))
        move = claim1_find_move(g, state)
        assert move.kind == "close_endpoints"
        out = claim1_apply_move(g, state, move)
        assert isinstance(out, VertexCycle) and is_ic_cycle(g, out)

    def test_extend_end(self):
        g = cycle_graph(4)
        state = PathState(g, (0, 1, 2))
        move = claim1_find_move(g, state)
        assert move.kind == "extend_end" and move.witnesses == {"end": 0, "h": 3}
        out = claim1_apply_move(g, state, move)
        assert out.path == (3, 0, 1, 2) and is_path_in(g, out.path)

    def test_rotate_ab_extends_through_off_path_vertex(self):
        # endpoints adjacent but the off-path pair blocks the closing move
        g = build_graph(6, [(0, 1), (1, 2), (2, 3), (0, 2), (0, 3), (1, 4), (4, 5)])
        state = PathState(g, (0, 1, 2, 3))
        assert not state.complement_independent()
        move = claim1_find_move(g, state)
        assert move.kind == "rotate_ab" and move.witnesses == {"t": 2, "h": 4}
        out = claim1_apply_move(g, state, move)
        assert out.path == (0, 3, 2, 1, 4)
        assert is_path_in(g, out.path)

    def test_rotate_ab_emits_shorter_cycle(self):
        g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 3), (1, 4)])
        state = PathState(g, (0, 1, 2, 3, 4))
        move = claim1_find_move(g, state)
        assert move.kind == "rotate_ab" and move.witnesses["h"] is None
        out = claim1_apply_move(g, state, move)
        assert isinstance(out, VertexCycle)
        assert out.order == (0, 1, 4, 3)
        assert is_ic_cycle(g, out)

    def test_rotate_c(self):
        g = build_graph(5, [(0, 1), (1, 2), (2, 3), (1, 3), (2, 4)])
        state = PathState(g, (0, 1, 2, 3))
        move = claim1_find_move(g, state)
        assert move.kind == "rotate_c" and move.witnesses == {"t": 1, "y": 4}
        out = claim1_apply_move(g, state, move)
        assert out.path == (0, 1, 3, 2, 4)
        assert is_path_in(g, out.path)

    def test_rotate_blocked_c(self):
        g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 3), (2, 5)])
        state = PathState(g, (0, 1, 2, 3, 4))
        move = claim1_find_move(g, state)
        assert move.kind == "rotate_blocked_c" and move.witnesses == {"t": 1, "y": 5}
        out = claim1_apply_move(g, state, move)
        assert out.path == (5, 2, 1, 0, 3, 4)
        assert is_path_in(g, out.path)

    def test_rotation_sets_fields(self):
        g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 3), (2, 5)])
        state = PathState(g, (0, 1, 2, 3, 4))
        rs = rotation_sets(g, state)
        assert rs.pivot == 5 and rs.mu == 1
        assert rs.c_positions == (1,)       # successor of index 1 is a pivot neighbor
        assert rs.blocked_positions == (1,)  # index 3 vertex is adjacent to the start

    def test_stall_implies_disjoint_rotation_sets(self):
        # whenever no move applies on an independent-complement state, the
        # three derived sets must be pairwise disjoint
        rng = random.Random(7)
        checked = 0
        for _ in range(3000):
            n = rng.randint(4, 9)
            edges = {(u, v) for u, v in itertools.combinations(range(n), 2)
                     if rng.random() < 0.35}
            g = build_graph(n, edges)
            path = [0]
            seen = {0}
            while True:
                nxt = [w for w in g.neighbors(path[-1]) if w not in seen]
                if not nxt:
                    break
                path.append(nxt[0])
                seen.add(nxt[0])
            state = PathState(g, tuple(path))
            if state.k == g.n or not state.complement_independent():
                continue
            if claim1_find_move(g, state) is not None:
                continue
            checked += 1
            rs = rotation_sets(g, state)
            b_positions = {i for i, v in enumerate(state.path)
                           if rs.b_mask >> v & 1}
            assert not (b_positions & set(rs.c_positions))
            assert not (set(rs.blocked_positions) & set(rs.c_positions))
            assert not (set(rs.blocked_positions) & b_positions)
        assert checked > 0


class TestClaim1Driver:
    def test_k7(self):
        out = claim1_hamiltonian_path(complete_graph(7))
        assert isinstance(out, (VertexPath, VertexCycle))
        if isinstance(out, VertexCycle):
            assert is_ic_cycle(complete_graph(7), out)

    def test_k33(self):
        g = k33_graph()
        out = claim1_hamiltonian_path(g)
        if isinstance(out, VertexPath):
            assert len(out) == 6 and is_path_in(g, out.order)
        else:
            assert is_ic_cycle(g, out)
        # the oracle agrees a Hamiltonian path exists at all
        assert any(
            has_hamiltonian_path_between(g, u, v) is not None
            for u, v in itertools.combinations(range(6), 2))

    def test_precondition_guard(self):
        with pytest.raises(PreconditionViolatedError):
            claim1_hamiltonian_path(extremal_graph(10, 3))  # 9 < 12
        with pytest.raises(PreconditionViolatedError):
            extremal_graph(10, 4)  # no such tight instance either

    def test_small_n_guard(self):
        with pytest.raises(PreconditionViolatedError):
            claim1_hamiltonian_path(complete_graph(5))

    def test_qualifying_sweep_produces_spanning_output(self):
        for n in (6, 7):
            for g in enumerate_graphs(n, two_connected=True, degree_condition=True):
                out = claim1_hamiltonian_path(g)
                if isinstance(out, VertexPath):
                    assert len(out) == n and is_path_in(g, out.order)
                else:
                    assert is_ic_cycle(g, out)


class TestBootstrap:
    def test_complete_graph_closes_hamiltonian_cycle(self):
        g = complete_graph(6)
        out = bootstrap_partition(g, VertexPath((0, 1, 2, 3, 4, 5)))
        assert isinstance(out, VertexCycle) and len(out) == 6

    def test_initial_partition_uses_longest_start_chord(self):
        g = build_graph(8, [(i, i + 1) for i in range(7)] + [(0, 2), (0, 4)])
        out = bootstrap_partition(g, VertexPath(tuple(range(8))))
        assert isinstance(out, CyclePathPartition)
        assert out.cycle == (0, 1, 2, 3, 4) and out.path == (5, 6, 7)

    def test_skip_vertex_branch(self):
        g = build_graph(11, [(i, i + 1) for i in range(10)] + [(0, 4), (2, 10)])
        out = bootstrap_partition(g, VertexPath(tuple(range(11))))
        assert isinstance(out, VertexCycle)
        assert out.order == (0, 1, 2, 10, 9, 8, 7, 6, 5, 4)
        assert is_ic_cycle(g, out)

    def test_suffix_branch(self):
        g = build_graph(8, [(i, i + 1) for i in range(7)] + [(0, 2), (3, 7)])
        out = bootstrap_partition(g, VertexPath(tuple(range(8))))
        assert isinstance(out, CyclePathPartition)
        assert out.cycle == (3, 4, 5, 6, 7) and out.path == (0, 1, 2)

    def test_mid_left_branch(self):
        g = build_graph(9, [(i, i + 1) for i in range(8)] + [(0, 2), (1, 4)])
        out = bootstrap_partition(g, VertexPath(tuple(range(9))))
        assert isinstance(out, CyclePathPartition)
        assert out.cycle == (0, 2, 3, 4, 1) and out.path == (5, 6, 7, 8)

    def test_mid_right_branch(self):
        g = build_graph(9, [(i, i + 1) for i in range(8)] + [(0, 2), (4, 8)])
        out = bootstrap_partition(g, VertexPath(tuple(range(9))))
        assert isinstance(out, CyclePathPartition)
        assert out.cycle == (4, 8, 7, 6, 5) and out.path == (0, 1, 2, 3)

    def test_rejects_non_hamiltonian_path(self):
        with pytest.raises(PreconditionViolatedError):
            bootstrap_partition(cycle_graph(5), VertexPath((0, 1, 2)))
        with pytest.raises(PreconditionViolatedError):
            bootstrap_partition(cycle_graph(5), VertexPath((0, 2, 4, 1, 3)))


def c6_plus_path(extra):
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (6, 7)] + extra
    return build_graph(8, edges)


class TestCase1:
    def test_insert_endpoint(self):
        g = c6_plus_path([(6, 0), (6, 1), (7, 3)])
        part = CyclePathPartition(g, (0, 1, 2, 3, 4, 5), (6, 7))
        out = improve_partition(g, part)
        assert isinstance(out, CyclePathPartition)
        assert out.cycle == (0, 6, 1, 2, 3, 4, 5) and out.path == (7,)

    def test_route_through_path(self):
        g = c6_plus_path([(6, 0), (7, 2)])
        part = CyclePathPartition(g, (0, 1, 2, 3, 4, 5), (6, 7))
        out = improve_partition(g, part)
        assert isinstance(out, CyclePathPartition)
        assert out.cycle == (6, 7, 2, 3, 4, 5, 0) and out.path == (1,)

    def test_single_leftover_vertex_emits(self):
        g = build_graph(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0),
                            (6, 0), (6, 3)])
        part = CyclePathPartition(g, (0, 1, 2, 3, 4, 5), (6,))
        out = improve_partition(g, part)
        assert isinstance(out, VertexCycle) and is_ic_cycle(g, out)

    def test_stall_raises_proof_gap(self):
        # distinct neighbors but too far apart on the cycle, nothing else applies
        edges = [(i, (i + 1) % 8) for i in range(8)] + [(8, 9), (8, 0), (9, 4)]
        g = build_graph(10, edges)
        part = CyclePathPartition(g, tuple(range(8)), (8, 9))
        with pytest.raises(ProofGapError):
            improve_partition(g, part)


def case2_host():
    """Outer C6, inner clique on 6..11, attachments 11-0 and 8-3."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]
    edges += list(itertools.combinations(range(6, 12), 2))
    edges += [(11, 0), (8, 3)]
    return build_graph(12, edges)


class TestCase2Pipeline:
    def test_isolated_endpoint_full_pipeline(self):
        g = case2_host()
        part = CyclePathPartition(g, (0, 1, 2, 3, 4, 5), (6, 7, 8, 9, 10, 11))
        tr = Trace(12)
        out = case2_pipeline(g, part, tr)
        assert isinstance(out, CyclePathPartition) and out.r == 10
        ops = [e.op for e in tr.events]
        assert "spacing_stalled" in ops and "bridge_pair" in ops and "combine" in ops
        assert any(e.op == "claim4" and e.data["branch"] == "isolated_lemma_close"
                   for e in tr.events)
        out.validate()

    def test_shared_neighbor_closure(self):
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]
        edges += list(itertools.combinations(range(6, 12), 2))
        edges += [(6, 0), (11, 0), (8, 3)]
        g = build_graph(12, edges)
        part = CyclePathPartition(g, (0, 1, 2, 3, 4, 5), (6, 7, 8, 9, 10, 11))
        tr = Trace(12)
        out = case2_pipeline(g, part, tr)
        assert isinstance(out, CyclePathPartition) and out.r > 6
        assert any(e.op == "claim4" and e.data["branch"] == "shared_lemma_close"
                   for e in tr.events)

    def test_shared_neighbor_swap(self):
        edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]
        edges += [(6, 7), (7, 8), (8, 9), (9, 10), (10, 11)]
        edges += [(6, 0), (11, 0)]
        g = build_graph(12, edges)
        part = CyclePathPartition(g, (0, 1, 2, 3, 4, 5), (6, 7, 8, 9, 10, 11))
        tr = Trace(12)
        out = case2_pipeline(g, part, tr)
        assert isinstance(out, CyclePathPartition) and out.r == 7
        assert out.cycle == (0, 6, 7, 8, 9, 10, 11)
        assert any(e.op == "claim4" and e.data["branch"] == "shared_swap"
                   for e in tr.events)

    def test_two_squares_terminal(self):
        g = build_graph(7, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6),
                            (4, 0), (6, 0), (5, 2)])
        part = CyclePathPartition(g, (0, 1, 2, 3), (4, 5, 6))
        tr = Trace(7)
        out = case2_pipeline(g, part, tr)
        assert isinstance(out, VertexCycle) and is_ic_cycle(g, out)
        assert any(e.op == "claim4" and e.data["branch"] == "two_squares"
                   for e in tr.events)

    def test_two_squares_longer_bridge(self):
        g = build_graph(7, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6),
                            (4, 0), (6, 0), (5, 1)])
        part = CyclePathPartition(g, (0, 1, 2, 3), (4, 5, 6))
        out = case2_pipeline(g, part, Trace(7))
        assert isinstance(out, VertexCycle) and is_ic_cycle(g, out)


def c7_plus_path(extra):
    edges = [(i, (i + 1) % 7) for i in range(7)] + [(7, 8), (8, 9), (9, 10)]
    return build_graph(11, edges + extra)


class TestSpacingMoves:
    def test_insert(self):
        g = c7_plus_path([(10, 0), (10, 1)])
        part = CyclePathPartition(g, tuple(range(7)), (7, 8, 9, 10))
        tr = Trace(11)
        out = case2_pipeline(g, part, tr)
        assert isinstance(out, CyclePathPartition) and out.r == 8
        assert any(e.op == "partition_move" and e.data["move"] == "spacing_insert"
                   for e in tr.events)

    def test_reroute_through_path(self):
        g = c7_plus_path([(10, 0), (10, 2), (1, 8)])
        part = CyclePathPartition(g, tuple(range(7)), (7, 8, 9, 10))
        tr = Trace(11)
        out = case2_pipeline(g, part, tr)
        assert isinstance(out, CyclePathPartition) and out.r == 10
        assert out.path == (7,)
        assert any(e.op == "partition_move" and e.data["move"] == "spacing_reroute"
                   for e in tr.events)

    def test_relocate_middle_vertex(self):
        g = c7_plus_path([(10, 0), (10, 2), (1, 4), (1, 5)])
        part = CyclePathPartition(g, tuple(range(7)), (7, 8, 9, 10))
        tr = Trace(11)
        out = case2_pipeline(g, part, tr)
        assert isinstance(out, CyclePathPartition) and out.r == 8
        assert any(e.op == "partition_move" and e.data["move"] == "spacing_relocate"
                   for e in tr.events)


class TestBridgePair:
    def test_minimal_distance_pair_selected(self):
        edges = [(0, 1), (1, 2), (2, 0)]
        edges += [(3, 4), (4, 5), (5, 6), (6, 7), (7, 3)]
        edges += [(4, 0), (6, 1), (7, 2)]
        g = build_graph(8, edges)
        part = CyclePathPartition(g, (0, 1, 2), (3, 4, 5, 6, 7))
        bp = select_bridge_pair(g, part, VertexCycle((3, 4, 5, 6, 7)))
        assert (bp.p, bp.q) == (6, 7)
        assert (bp.p0, bp.q0) == (1, 2)
        assert bp.h1 == ()
        assert bp.h2 == (5, 4, 3)

    def test_no_distinct_neighbors(self):
        edges = [(0, 1), (1, 2), (2, 0)]
        edges += [(3, 4), (4, 5), (5, 6), (6, 7), (7, 3)]
        edges += [(4, 0), (6, 0)]
        g = build_graph(8, edges)
        part = CyclePathPartition(g, (0, 1, 2), (3, 4, 5, 6, 7))
        assert select_bridge_pair(g, part, VertexCycle((3, 4, 5, 6, 7))) is None


class TestClaim5:
    def test_empty_short_arc_returns_immediately(self):
        g = cycle_graph(4)
        bp = BridgePair(p=0, q=1, p0=90, q0=91, h1=(), h2=(3, 2))
        out = claim5_hamiltonian_path_pq(g, VertexCycle((0, 1, 2, 3)), bp, Trace(4))
        assert out.order == (0, 3, 2, 1)

    def test_direct_splice(self):
        g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)])
        bp = BridgePair(p=0, q=3, p0=90, q0=91, h1=(1, 2), h2=(5, 4))
        tr = Trace(6)
        out = claim5_hamiltonian_path_pq(g, VertexCycle((0, 1, 2, 3, 4, 5)), bp, tr)
        assert out.order == (0, 5, 4, 1, 2, 3)
        assert is_path_in(g, out.order)
        assert any(e.op == "claim5_move" and e.data["move"] == "splice"
                   for e in tr.events)

    def test_absorb_arc_then_insert(self):
        cyc = [(i, i + 1) for i in range(9)] + [(9, 0)]
        chords = [(6, 9), (2, 6), (7, 9), (3, 7), (3, 8), (0, 8), (4, 9)]
        g = build_graph(10, cyc + chords)
        bp = BridgePair(p=5, q=0, p0=90, q0=91,
                        h1=(6, 7, 8, 9), h2=(4, 3, 2, 1))
        tr = Trace(10)
        out = claim5_hamiltonian_path_pq(
            g, VertexCycle((5, 6, 7, 8, 9, 0, 1, 2, 3, 4)), bp, tr)
        assert out.order == (5, 4, 9, 6, 7, 8, 3, 2, 1, 0)
        assert is_path_in(g, out.order)
        moves = [e.data["move"] for e in tr.events if e.op == "claim5_move"]
        assert "absorb" in moves and "insert" in moves

    def test_park_bypassed_vertex(self):
        cyc = [(5, 6), (6, 7), (7, 0), (0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]
        chords = [(7, 1), (6, 3), (4, 2)]
        g = build_graph(8, cyc + chords)
        bp = BridgePair(p=5, q=0, p0=90, q0=91, h1=(6, 7), h2=(4, 3, 2, 1))
        tr = Trace(8)
        out = claim5_hamiltonian_path_pq(
            g, VertexCycle((5, 6, 7, 0, 1, 2, 3, 4)), bp, tr)
        assert out.order == (5, 6, 3, 4, 2, 1, 7, 0)
        assert is_path_in(g, out.order)
        moves = [e.data["move"] for e in tr.events if e.op == "claim5_move"]
        assert "splice_park" in moves

    def test_sparse_short_arc_vertex_rejected(self):
        g = cycle_graph(8)
        bp = BridgePair(p=0, q=3, p0=90, q0=91, h1=(1, 2), h2=(7, 6, 5, 4))
        with pytest.raises(ProofGapError):
            claim5_hamiltonian_path_pq(g, VertexCycle(tuple(range(8))), bp, Trace(8))


class TestConstructDriver:
    def test_k4_delegates(self):
        cycle, trace = construct_ic_cycle(complete_graph(4))
        assert is_ic_cycle(complete_graph(4), cycle)
        assert trace.delegated

    def test_c5_rejected(self):
        with pytest.raises(PreconditionViolatedError):
            construct_ic_cycle(cycle_graph(5))

    def test_not_two_connected_rejected(self):
        g = build_graph(6, [(0, 1)])
        with pytest.raises(PreconditionViolatedError):
            construct_ic_cycle(g)

    @pytest.mark.parametrize("n", range(3, 8))
    def test_qualifying_sweep_matches_oracle(self, n):
        for g in enumerate_graphs(n, two_connected=True, degree_condition=True):
            cycle, trace = construct_ic_cycle(g, fallback_to_oracle=False)
            assert is_ic_cycle(g, cycle)
            assert validate_trace(g, trace)
            assert not trace.fallback_used
            assert find_ic_cycle_exact(g).outcome == Outcome.FOUND

    def test_fallback_engages_on_stall(self, monkeypatch):
        import ic_cycles.construct as mod

        def boom(g, trace=None):
            raise ProofGapError("synthetic stall")

        monkeypatch.setattr(mod, "claim1_hamiltonian_path", boom)
        g = complete_graph(7)
        cycle, trace = mod.construct_ic_cycle(g)
        assert is_ic_cycle(g, cycle)
        assert trace.fallback_used
        with pytest.raises(ProofGapError):
            mod.construct_ic_cycle(g, fallback_to_oracle=False)


class TestValidateTrace:
    def test_detects_non_monotone_r(self):
        g = complete_graph(6)
        trace = Trace(6)
        trace.add("partition_move", move="x", r_before=5, r_after=5)
        assert not validate_trace(g, trace)

    def test_detects_bad_case2_entry(self):
        trace = Trace(9)
        trace.add("case2_enter", r=7, n=9, k_a=0, k_b=0)
        assert not validate_trace(complete_graph(6), trace)
