import random
from dataclasses import replace

import pytest

from src.errors import FieldError, GicParseError, GicStructureError, InputError
from src.fields.field_matrix import FieldMatrix
from src.gic.generator import generate_gic, mutate_gic
from src.gic.gic_code import (
    assign_vectors,
    build_gic_code,
    expected_count,
    gic_decode,
    gic_encode,
    gic_round_trip,
)
from src.gic.structure import (
    GicStructure,
    check_gic,
    parse_gic,
    read_gic_file,
    require_valid,
    serialize_gic,
    subtree_coincidence_check,
)
from src.graphs.side_info_graph import Graph


def structure(n, edges, inner, trees, k):
    return GicStructure(Graph.from_edges(n, edges), tuple(inner), trees, k)


# ===========================================
# STRUCTURE AND FILE FORMAT
# ===========================================

def test_fixtures_are_valid(six_cycle, shared_fan):
    for s in (six_cycle, shared_fan):
        assert check_gic(s).valid
        assert subtree_coincidence_check(s)
    assert six_cycle.n == 3 and six_cycle.k == 1 and six_cycle.graph.n == 6
    assert six_cycle.non_inner == (3, 4, 5)
    assert six_cycle.inner_leaves(0) == (1,)
    assert shared_fan.children(0, 3) == (1, 2)
    assert shared_fan.descendants(0, 0) == {1, 2, 3}


def test_broken_fixture(fixtures_dir):
    s = parse_gic((fixtures_dir / "broken.gic").read_text())
    report = check_gic(s)
    assert not report.valid
    assert {"i_cycle", "union"} <= report.conditions()
    with pytest.raises(GicStructureError):
        require_valid(s)


def test_default_k_from_inner_leaves(fixtures_dir):
    text = (fixtures_dir / "six_cycle.gic").read_text().replace("k: 1\n", "")
    assert parse_gic(text).k == 1


def test_too_few_inner_leaves(six_cycle):
    report = check_gic(replace(six_cycle, k=0))
    assert report.conditions() == {"leaves"}


def test_tree_edge_missing_from_graph():
    s = structure(3, [(0, 1), (1, 0)], [0, 1], {0: {1: 0}, 1: {0: 1, 2: 0}}, 1)
    assert "tree" in check_gic(s).conditions()


def test_two_p_paths():
    s = structure(
        5,
        [(0, 3), (3, 1), (0, 4), (4, 1), (1, 0)],
        [0, 1],
        {0: {3: 0, 1: 3}, 1: {0: 1}},
        0,
    )
    report = check_gic(s)
    assert {"p_path", "union"} <= report.conditions()
    witness = next(v for v in report.violations if v.condition == "p_path").witness
    assert sorted(witness) == [[0, 3, 1], [0, 4, 1]]


def test_non_inner_cycle():
    s = structure(
        4,
        [(0, 2), (2, 1), (2, 3), (3, 2), (1, 0)],
        [0, 1],
        {0: {2: 0, 1: 2}, 1: {0: 1}},
        0,
    )
    assert "non_inner_cycle" in check_gic(s).conditions()


def test_non_inner_out_neighbors_must_be_children():
    s = structure(3, [(0, 2), (2, 1), (1, 2), (2, 0)], [0, 1], {0: {2: 0, 1: 2}, 1: {2: 1, 0: 2}}, 0)
    report = check_gic(s)
    coincidence = [v for v in report.violations if v.condition == "coincidence"]
    assert sorted(v.witness for v in coincidence) == [[0, 2], [1, 2]]
    with pytest.raises(GicStructureError):
        build_gic_code(s, 7)


def test_subtree_coincidence_detects_disagreement():
    s = structure(
        4,
        [(0, 3), (3, 2), (1, 3), (3, 0)],
        [0, 1, 2],
        {0: {3: 0, 2: 3}, 1: {3: 1, 0: 3}, 2: {}},
        2,
    )
    assert not subtree_coincidence_check(s)


def test_structure_validation():
    g = Graph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(InputError):
        GicStructure(g, (), {}, 0)
    with pytest.raises(InputError):
        GicStructure(g, (0, 1), {0: {1: 0}}, 0)
    with pytest.raises(InputError):
        GicStructure(g, (0, 1), {0: {1: 0}, 1: {0: 1}}, 2)


@pytest.mark.parametrize(
    "text, line_no",
    [
        ("2\n0 1\n1 0\ninner: 0 1\ntree 0: 1-0\n", 5),
        ("2\n0 1\n1 0\ninner: 0 x\n", 4),
        ("2\n0 1\n1 0\ninner: 0 1\ntree 0: 1:0\ntree 0: 1:0\n", 6),
        ("2\n0 1\n1 0\ninner: 0 1\ntree 0: 1:0 1:0\n", 5),
        ("2\n0 1\n0 7\ninner: 0 1\n", 3),
        ("2\n0 1\n1 0\ninner: 0 \u00b9\n", 4),
        ("2\n0 1\n1 0\ninner: 0 1\ntree 0: \u00b9:0\n", 5),
    ],
)
def test_parse_errors(text, line_no):
    with pytest.raises(GicParseError) as exc:
        parse_gic(text)
    assert exc.value.line_no == line_no


def test_missing_inner_line():
    with pytest.raises(GicParseError):
        parse_gic("2\n0 1\n1 0\n")


def test_unreadable_gic_file(tmp_path):
    binary = tmp_path / "binary.gic"
    binary.write_bytes(b"2\n0 1\n1 0\ninner: 0 \xff\n")
    with pytest.raises(InputError):
        read_gic_file(binary)


def test_serialized_structure_parses_back(shared_fan):
    text = serialize_gic(shared_fan)
    assert "tree 0: 1:3 2:3 3:0" in text
    assert parse_gic(text) == shared_fan


# ===========================================
# CODE
# ===========================================

def test_vector_assignment(six_cycle):
    code = build_gic_code(six_cycle, 7, seed=0)
    for c, v in enumerate(six_cycle.inner):
        assert code.u[v] == code.mds.columns([c])
    for v in six_cycle.non_inner:
        total = code.u[v]
        for l in six_cycle.graph.neighbors(v):
            total = total + code.u[l]
        assert total.is_zero()
        assert code.u[v].shape == (2, 1)


def test_assign_vectors_checks_generator_shape(six_cycle):
    with pytest.raises(FieldError):
        assign_vectors(six_cycle, FieldMatrix.identity(7, 3))


@pytest.mark.parametrize("q", [5, 7, 11])
def test_round_trip_on_fixtures(six_cycle, shared_fan, q):
    rng = random.Random(q)
    for s in (six_cycle, shared_fan):
        code = build_gic_code(s, q, seed=q)
        for _ in range(5):
            data = {v: rng.randrange(q) for v in range(s.graph.n)}
            assert gic_round_trip(code, data) == []


def test_transmission_counts(six_cycle, shared_fan):
    assert expected_count(six_cycle) == 5
    assert expected_count(shared_fan) == 2
    for s in (six_cycle, shared_fan):
        code = build_gic_code(s, 7)
        tx = gic_encode(code, {v: 1 for v in range(s.graph.n)})
        assert tx.count == expected_count(s)
    assert build_gic_code(shared_fan, 7).uses_combined(3)


def test_wide_messages(shared_fan):
    code = build_gic_code(shared_fan, 11, seed=1)
    data = {v: [v, 2 * v, 3] for v in range(shared_fan.graph.n)}
    tx = gic_encode(code, data)
    side = {u: data[u] for u in shared_fan.graph.neighbors(0)}
    assert gic_decode(code, 0, tx, side).to_lists() == [[0, 0, 3]]
    assert gic_round_trip(code, data) == []


def test_decode_needs_side_information(six_cycle):
    code = build_gic_code(six_cycle, 7)
    tx = gic_encode(code, {v: v for v in range(6)})
    with pytest.raises(InputError):
        gic_decode(code, 0, tx, {})


def test_invalid_structure_has_no_code(fixtures_dir):
    s = parse_gic((fixtures_dir / "broken.gic").read_text())
    with pytest.raises(GicStructureError):
        build_gic_code(s, 7)


def test_field_too_small_for_mds():
    s = generate_gic(5, 1, seed=3)
    with pytest.raises(FieldError):
        build_gic_code(s, 3)


# ===========================================
# GENERATOR AND MUTATIONS
# ===========================================

@pytest.mark.parametrize("n, k, max_path_len", [(2, 0, 1), (3, 1, 2), (4, 0, 3), (5, 2, 3), (6, 3, 4)])
def test_generated_structures_are_valid(n, k, max_path_len):
    for seed in range(10):
        s = generate_gic(n, k, max_path_len, seed)
        assert check_gic(s).valid
        assert subtree_coincidence_check(s)
        assert all(len(s.inner_leaves(i)) == n - k - 1 for i in s.inner)


def test_direct_edges_only():
    s = generate_gic(4, 1, max_path_len=1, seed=0)
    assert s.graph.n == 4
    assert s.non_inner == ()


def test_generator_is_deterministic():
    assert serialize_gic(generate_gic(5, 1, 3, seed=9)) == serialize_gic(generate_gic(5, 1, 3, seed=9))


@pytest.mark.parametrize("n, k, max_path_len", [(1, 0, 1), (4, 3, 1), (4, -1, 1), (4, 1, 0)])
def test_generator_arguments(n, k, max_path_len):
    with pytest.raises(InputError):
        generate_gic(n, k, max_path_len)


def test_mutations_are_rejected():
    kinds = set()
    for seed in range(20):
        s = generate_gic(4, 1, 3, seed)
        mutation = mutate_gic(s, seed)
        kinds.add(mutation.kind)
        assert not check_gic(mutation.structure).valid, mutation.detail
    assert kinds == {"edge_deletion", "i_cycle"}


def test_generated_codes_decode():
    for seed in range(5):
        s = generate_gic(5, 2, 3, seed)
        code = build_gic_code(s, 7, seed)
        data = {v: (3 * v + seed) % 7 for v in range(s.graph.n)}
        assert gic_round_trip(code, data) == []
        assert gic_encode(code, data).count == expected_count(s)
