from itertools import combinations

import pytest

from src.errors import GraphParseError, InputError
from src.graphs.graph_io import parse_graph, read_graph_file, serialize_graph, to_dot
from src.graphs.side_info_graph import Graph, all_graphs, canonical_order, nonempty_subsets
from src.optimization.cover_programs import solve_program


def test_six_vertex_neighbors(six_vertex):
    assert six_vertex.n == 6
    assert six_vertex.labels == ("A", "B", "C", "D", "E", "F")
    expected = {0: {2, 4, 5}, 1: {0, 4}, 2: {1}, 3: {2, 5}, 4: {0, 3, 5}, 5: {3, 4}}
    for v, nbrs in expected.items():
        assert six_vertex.neighbors(v) == frozenset(nbrs)


def test_non_neighborhoods(six_vertex):
    assert six_vertex.closed_non_neighbors(0) == (0, 1, 3)
    assert six_vertex.open_non_neighbors(0) == (1, 3)
    assert six_vertex.open_non_neighbors(2) == (0, 3, 4, 5)


@pytest.mark.parametrize(
    "members, k",
    [
        ((0,), 0),
        ((3, 5), 0),  # D <-> F
        ((0, 4), 0),  # A <-> E
        ((0, 4, 5), 1),
        ((0, 1, 2, 3, 4, 5), 4),
    ],
)
def test_partial_clique_degree(six_vertex, members, k):
    assert six_vertex.partial_clique_degree(members) == k


def test_clique_iff_degree_zero(six_vertex):
    for members in nonempty_subsets(six_vertex.n):
        assert six_vertex.is_clique(members) == (six_vertex.partial_clique_degree(members) == 0)


def test_partial_clique_degree_is_monotone():
    for seed in range(20):
        g = Graph.random(6, 0.5, seed)
        for members in nonempty_subsets(g.n):
            k = g.partial_clique_degree(members)
            for size in range(1, len(members)):
                for sub in combinations(members, size):
                    assert g.partial_clique_degree(sub) <= k


def test_induced_subgraph_relabels(six_vertex):
    sub, relabel = six_vertex.induced_subgraph([5, 3, 4])
    assert relabel == {3: 0, 4: 1, 5: 2}
    assert sub.labels == ("D", "E", "F")
    # D -> F, E -> D, E -> F, F -> D, F -> E
    assert sub.edges() == [(0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


def test_empty_set_rejected(six_vertex):
    with pytest.raises(InputError):
        six_vertex.partial_clique_degree([])


def test_self_loop_rejected():
    with pytest.raises(InputError):
        Graph.from_edges(2, [(1, 1)])


def test_acyclicity(c5):
    assert not c5.is_acyclic()
    assert c5.is_acyclic([0, 2])
    assert Graph.directed_cycle(4).is_acyclic([0, 1, 2])


def test_all_graphs_counts():
    assert sum(1 for _ in all_graphs(2)) == 4
    assert sum(1 for _ in all_graphs(3)) == 64


def test_canonical_order():
    assert canonical_order([(2, 1), (0,), (1, 0, 0)]) == [(0,), (0, 1), (1, 2)]


def test_serialize_is_canonical(six_vertex):
    text = serialize_graph(six_vertex)
    assert text.splitlines()[0] == "6"
    assert text.splitlines()[1] == "name 0 A"
    assert parse_graph(text) == six_vertex
    assert serialize_graph(parse_graph(text)) == text


@pytest.mark.parametrize(
    "text, line_no",
    [
        ("x\n0 1\n", 1),
        ("3\n0 1\n0 5\n", 3),
        ("# header\n3\n\n1 1\n", 4),
        ("3\n0 1 2\n", 2),
        ("3\nname 7 Z\n", 2),
        ("3\n0 \u00b2\n", 2),
        ("\u00b3\n", 1),
        ("3\nname \u0661 Z\n", 2),
    ],
)
def test_parse_errors_name_the_line(text, line_no):
    with pytest.raises(GraphParseError) as exc:
        parse_graph(text)
    assert exc.value.line_no == line_no
    assert f"line {line_no}" in str(exc.value)


def test_missing_header():
    with pytest.raises(GraphParseError):
        parse_graph("# only a comment\n")


def test_unreadable_graph_file(tmp_path):
    binary = tmp_path / "binary.graph"
    binary.write_bytes(b"3\n0 1\n\xff\xfe 2\n")
    with pytest.raises(InputError):
        read_graph_file(binary)
    with pytest.raises(InputError):
        read_graph_file(tmp_path / "missing.graph")


def test_to_dot_with_cover(k3):
    cover = solve_program(k3, "local_partial")
    dot = to_dot(k3, cover)
    assert dot.startswith("digraph side_information {")
    assert "subgraph cluster_0" in dot
    assert "0 -> 1;" in dot
