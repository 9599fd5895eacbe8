"""
Randomized acceptance suites.
Run with: pytest -m slow (ICW_SUITE_SIZE scales the number of graphs)
"""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from src.codes.builders import build_ak_code_matrix, build_code_matrix, build_recursive_code_matrix
from src.codes.encoding_matrix import random_data, round_trip, verify_alignment
from src.gic.generator import generate_gic, mutate_gic
from src.gic.gic_code import build_gic_code, expected_count, gic_encode, gic_round_trip
from src.gic.structure import check_gic, subtree_coincidence_check
from src.graphs.graph_io import read_graph_file
from src.graphs.side_info_graph import Graph, all_graphs
from src.optimization.cover_programs import solve_program
from src.optimization.recursive_programs import solve_recursive
from src.oracles.brute_force import PARTITION_PROGRAMS, exhaustive_partition_optimum, mais

pytestmark = pytest.mark.slow

TRANSCRIBED = Path(__file__).parent / "fixtures" / "fig3.graph"


def random_graphs(count, sizes, seed):
    rng = random.Random(seed)
    for i in range(count):
        yield Graph.random(rng.choice(sizes), rng.choice([0.2, 0.4, 0.6, 0.8]), seed * 100_000 + i)


def test_program_dominance_chain(suite_size):
    for g in random_graphs(suite_size, range(1, 8), 1):
        lp = solve_program(g, "local_partial_lp").objective
        ip = solve_program(g, "local_partial").objective
        chromatic = solve_program(g, "local_chromatic").objective
        partial = solve_program(g, "partial_clique").objective
        ak = solve_program(g, "ak").objective
        assert lp <= ip <= ak <= min(chromatic, partial)
        assert chromatic <= solve_program(g, "clique_cover").objective
        assert solve_recursive(g, fractional=True).optimum <= lp


def test_acyclic_floor(suite_size):
    for g in random_graphs(suite_size // 2, range(1, 8), 2):
        floor = mais(g).value
        assert floor <= solve_program(g, "local_partial_lp").objective
        assert floor <= solve_recursive(g, fractional=True).optimum


def test_main_code_soundness(suite_size):
    rng = random.Random(3)
    for i, g in enumerate(random_graphs(suite_size // 4, range(1, 7), 3)):
        cover = solve_program(g, "local_partial")
        e = build_code_matrix(g, cover, seed=i)
        assert e.m_rows == cover.objective
        assert verify_alignment(e, g).ok
        for _ in range(20):
            assert round_trip(e, g, random_data(e, rng)) == []


def test_partition_oracle_on_every_small_graph():
    for n in (1, 2, 3, 4):
        for i, g in enumerate(all_graphs(n)):
            programs = PARTITION_PROGRAMS if n < 4 or i % 16 == 0 else ("local_partial",)
            for program in programs:
                assert exhaustive_partition_optimum(g, program).value == solve_program(g, program).objective


def test_partition_oracle_on_random_graphs(suite_size):
    for g in random_graphs(suite_size // 10, [5, 6], 4):
        for program in PARTITION_PROGRAMS:
            assert exhaustive_partition_optimum(g, program).value == solve_program(g, program).objective


def test_generated_gic_codes():
    rng = random.Random(5)
    for seed in range(100):
        n = rng.randint(2, 6)
        k = rng.randint(0, n - 2)
        q = rng.choice([5, 7, 11])
        s = generate_gic(n, k, rng.randint(1, 4), seed)
        assert check_gic(s).valid
        assert subtree_coincidence_check(s)
        code = build_gic_code(s, q, seed)
        data = {v: rng.randrange(q) for v in range(s.graph.n)}
        assert gic_round_trip(code, data) == []
        assert gic_encode(code, data).count == expected_count(s)


def test_mutated_gic_structures_are_rejected():
    for seed in range(50):
        s = generate_gic(3 + seed % 4, seed % 2, 3, seed)
        mutation = mutate_gic(s, seed)
        assert not check_gic(mutation.structure).valid, mutation.detail


def test_fractional_cover_beats_integer_somewhere(six_vertex):
    assert solve_program(six_vertex, "local_partial_lp").objective == Fraction(7, 2)
    assert solve_program(six_vertex, "local_partial").objective == 4


def test_main_rate_never_exceeds_ak_rate(suite_size):
    for i, g in enumerate(random_graphs(suite_size // 4, range(1, 7), 6)):
        main = build_code_matrix(g, solve_program(g, "local_partial"), seed=i)
        ak = build_ak_code_matrix(g, solve_program(g, "ak"), seed=i)
        assert main.rate <= ak.rate


def test_recursive_codes_on_eight_vertices():
    rng = random.Random(7)
    for seed in range(50):
        g = Graph.random(8, rng.choice([0.3, 0.5, 0.7]), seed)
        result = solve_recursive(g, fractional=seed % 5 == 0)
        e = build_recursive_code_matrix(g, result, seed=seed)
        assert e.rate == result.optimum
        assert verify_alignment(e, g).ok
        assert round_trip(e, g, random_data(e, rng)) == []


@pytest.mark.skipif(not TRANSCRIBED.exists(), reason="transcribed six-vertex example graph not present")
def test_transcribed_example_graph():
    g = read_graph_file(TRANSCRIBED)
    assert solve_recursive(g, fractional=True).optimum == 3
    assert solve_program(g, "local_partial_lp").objective == Fraction(7, 2)
