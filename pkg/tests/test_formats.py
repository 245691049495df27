import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete_graph, cycle_graph, edges_of
from ic_cycles.errors import (
    MalformedEdgeListError,
    MalformedGraph6Error,
    SelfLoopError,
    VertexOutOfRangeError,
)
from ic_cycles.formats import (
    parse_edge_list,
    parse_graph6,
    strip_graph6_header,
    write_edge_list,
    write_graph6,
)
from ic_cycles.graph import build_graph
from ic_cycles.harness import enumerate_graphs


def table_decode_graph6(text: str) -> tuple[int, set[tuple[int, int]]]:
    """Independent table-driven decoder: chars to bit string to pair table."""
    assert ord(text[0]) != 126, "reference decoder handles short records only"
    n = ord(text[0]) - 63
    bitstring = "".join(format(ord(ch) - 63, "06b") for ch in text[1:])
    pair_table = [(i, j) for j in range(n) for i in range(j)]
    edges = {pair_table[k] for k, bit in enumerate(bitstring[:len(pair_table)])
             if bit == "1"}
    return n, edges


class TestGraph6:
    def test_round_trip_K5(self):
        assert write_graph6(parse_graph6("D~{")) == "D~{"

    def test_dqc_against_reference(self):
        n, edges = table_decode_graph6("DQc")
        g = parse_graph6("DQc")
        assert g.n == n == 5
        assert edges_of(g) == edges

    def test_smallest_nontrivial(self):
        g = parse_graph6("A?")
        assert g.n == 2 and g.edge_count() == 0
        assert write_graph6(g) == "A?"

    def test_header_stripped(self):
        assert strip_graph6_header(">>graph6<<D~{ ") == "D~{"
        assert parse_graph6(">>graph6<<D~{").n == 5

    def test_bad_length(self):
        with pytest.raises(MalformedGraph6Error):
            parse_graph6("D~")
        with pytest.raises(MalformedGraph6Error):
            parse_graph6("D~{{")

    def test_char_out_of_range(self):
        with pytest.raises(MalformedGraph6Error):
            parse_graph6("D~\x1f")

    def test_padding_bits(self):
        # C5 on 5 vertices: 10 data bits + 2 padding bits in the second char
        line = write_graph6(cycle_graph(5))
        dirty = line[:-1] + chr(((ord(line[-1]) - 63) | 1) + 63)
        with pytest.raises(MalformedGraph6Error):
            parse_graph6(dirty)
        g = parse_graph6(dirty, strict=False)
        assert edges_of(g) == edges_of(cycle_graph(5))

    def test_empty_record(self):
        with pytest.raises(MalformedGraph6Error):
            parse_graph6("")

    def test_long_form_size(self):
        g = build_graph(63, [(0, 62), (5, 30)])
        line = write_graph6(g)
        assert line.startswith("~")
        back = parse_graph6(line)
        assert back.n == 63 and edges_of(back) == {(0, 62), (5, 30)}

    @pytest.mark.parametrize("n", range(1, 7))
    def test_round_trip_canonical(self, n):
        for g in enumerate_graphs(n, "canonical"):
            back = parse_graph6(write_graph6(g))
            assert back.n == g.n and back.adj == g.adj

    @given(st.integers(0, 12).flatmap(
        lambda n: st.tuples(st.just(n), st.sets(
            st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0)))
            .filter(lambda e: e[0] != e[1])))))
    @settings(max_examples=200, deadline=None)
    def test_writer_output_printable(self, ne):
        n, edges = ne
        line = write_graph6(build_graph(n, edges))
        assert line == line.strip()
        assert all(63 <= ord(ch) <= 126 for ch in line)
        back = parse_graph6(line)
        assert back.adj == build_graph(n, edges).adj


class TestEdgeList:
    def test_parse_c5(self):
        g = parse_edge_list("5 5\n0 1\n1 2\n2 3\n3 4\n4 0")
        assert edges_of(g) == edges_of(cycle_graph(5))

    def test_write_k4(self):
        text = write_edge_list(complete_graph(4))
        lines = text.splitlines()
        assert lines[0] == "4 6"
        assert lines[1:] == ["0 1", "0 2", "0 3", "1 2", "1 3", "2 3"]

    def test_round_trip_sorted(self):
        g = cycle_graph(6)
        assert parse_edge_list(write_edge_list(g)).adj == g.adj

    def test_out_of_range(self):
        with pytest.raises(VertexOutOfRangeError):
            parse_edge_list("3 1\n0 3")

    def test_self_loop(self):
        with pytest.raises(SelfLoopError):
            parse_edge_list("3 1\n1 1")

    def test_malformed(self):
        for text in ("", "3", "3 2\n0 1", "3 1\n0 1 2", "x y\n", "3 one\n0 1"):
            with pytest.raises(MalformedEdgeListError):
                parse_edge_list(text)
