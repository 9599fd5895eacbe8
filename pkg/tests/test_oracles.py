from fractions import Fraction

import pytest

from src.errors import CapExceededError, InputError
from src.graphs.side_info_graph import Graph, all_graphs
from src.optimization.branch_and_bound import solve_ilp
from src.optimization.cover_programs import build_program, solve_program
from src.oracles.brute_force import (
    PARTITION_PROGRAMS,
    exhaustive_ilp,
    exhaustive_partition_optimum,
    mais,
    minrank_bruteforce,
    oracle_rates,
    set_partitions,
)


def test_minrank_known_values(k3, empty3, c5):
    assert minrank_bruteforce(k3).value == 1
    assert minrank_bruteforce(empty3).value == 3
    assert minrank_bruteforce(c5).value == 3


def test_minrank_witness_fits_graph(c5):
    result = minrank_bruteforce(c5)
    for i, row in enumerate(result.witness):
        assert row[i] == 1
        for j, x in enumerate(row):
            if j != i and x:
                assert c5.has_edge(i, j)


def test_minrank_cap():
    with pytest.raises(CapExceededError):
        minrank_bruteforce(Graph.complete(5))


def test_mais(k3, empty3, c5):
    assert mais(k3).value == 1
    assert mais(empty3).value == 3
    result = mais(c5)
    assert result.value == 2
    assert c5.is_acyclic(result.witness)


def test_mais_below_rates(six_vertex):
    floor = mais(six_vertex).value
    assert floor <= Fraction(7, 2)
    assert floor <= solve_program(six_vertex, "local_partial").objective


@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (3, 5), (4, 15), (5, 52)])
def test_set_partitions_are_bell_numbers(n, count):
    partitions = list(set_partitions(n))
    assert len(partitions) == count
    for partition in partitions:
        assert sorted(v for block in partition for v in block) == list(range(n))


def test_partition_oracle_on_six_vertex(six_vertex):
    result = exhaustive_partition_optimum(six_vertex, "local_partial")
    assert result.name == "partition:local_partial"
    assert result.value == 4
    assert result.enumerated == 203


def test_partition_oracle_matches_ilp_on_small_graphs():
    for n in (1, 2, 3):
        for g in all_graphs(n):
            for program in PARTITION_PROGRAMS:
                assert exhaustive_partition_optimum(g, program).value == solve_program(g, program).objective


def test_partition_oracle_arguments(k3):
    with pytest.raises(InputError):
        exhaustive_partition_optimum(k3, "local_partial_lp")
    with pytest.raises(InputError):
        exhaustive_partition_optimum(Graph.empty(0), "local_partial")
    with pytest.raises(CapExceededError):
        exhaustive_partition_optimum(Graph.empty(4), "local_partial", cap=3)


def test_exhaustive_ilp_matches_branch_and_bound():
    for seed in range(5):
        g = Graph.random(3, 0.5, seed)
        problem = build_program(g, "local_partial", prune=False)
        assert exhaustive_ilp(problem).optimum == solve_ilp(problem).optimum


def test_exhaustive_ilp_cap(six_vertex):
    with pytest.raises(CapExceededError):
        exhaustive_ilp(build_program(six_vertex, "local_partial", prune=False))


def test_oracle_rates(k3):
    rows = dict(oracle_rates(k3))
    assert rows["mais"] == 1
    assert all(rows[p] == 1 for p in PARTITION_PROGRAMS)


def test_minrank_below_clique_cover():
    for seed in range(5):
        g = Graph.random(4, 0.4, seed)
        assert minrank_bruteforce(g).value <= solve_program(g, "clique_cover").objective
