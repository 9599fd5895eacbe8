import json
from fractions import Fraction

import pytest

import cli
from config import Config
from src.gic.structure import check_gic, read_gic_file
from src.optimization.cover_programs import parse_rational


def run(capsys, *argv):
    """cli.main(argv) -> (exit code, stdout, stderr)"""
    try:
        cli.main([str(a) for a in argv])
        code = 0
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def optima(stdout: str) -> dict:
    return {r["scheme"]: r["optimum"] for r in json.loads(stdout)["schemes"]}


# ===========================================
# RATE
# ===========================================

def test_rate_six_vertex_fractional(capsys, fixtures_dir):
    code, out, _ = run(capsys, "rate", fixtures_dir / "six_vertex.graph", "--fractional")
    assert code == 0
    assert "RATE COMPARISON" in out
    assert "LOCAL PARTIAL CLIQUE COVER" in out


def test_rate_six_vertex_json(capsys, fixtures_dir):
    code, out, _ = run(capsys, "rate", fixtures_dir / "six_vertex.graph", "--fractional", "--json")
    assert code == 0
    rows = optima(out)
    assert rows["local_chromatic_lp"] == "4"
    assert rows["partial_clique_lp"] == "11/3"
    assert rows["local_partial_lp"] == "7/2"
    assert rows["local_partial"] == "4"


@pytest.mark.parametrize("name, value", [("k3.graph", "1"), ("empty3.graph", "3")])
def test_rate_trivial_graphs(capsys, fixtures_dir, name, value):
    code, out, _ = run(capsys, "rate", fixtures_dir / name, "--json")
    assert code == 0
    rows = optima(out)
    assert set(rows) == {"local_chromatic", "partial_clique", "ak", "local_partial", "clique_cover"}
    assert set(rows.values()) == {value}


def test_rate_recursive_and_dot(capsys, fixtures_dir, tmp_path):
    dot = tmp_path / "six_vertex.dot"
    code, out, _ = run(
        capsys, "rate", fixtures_dir / "six_vertex.graph", "--schemes", "local_partial", "--recursive", "--dot", dot, "--json"
    )
    assert code == 0
    report = json.loads(out)
    names = [r["scheme"] for r in report["schemes"]]
    assert names == ["local_partial", "recursive_lp", "recursive_ip"]
    assert report["schemes"][1]["subproblems"] >= 1
    assert report["artifacts"]["dot"] == str(dot)
    assert dot.read_text().startswith("digraph")


def test_rate_is_deterministic(capsys, fixtures_dir, tmp_path):
    report = tmp_path / "report.json"
    _, first, _ = run(capsys, "rate", fixtures_dir / "six_vertex.graph", "--json", "--report", report)
    _, second, _ = run(capsys, "rate", fixtures_dir / "six_vertex.graph", "--json")
    assert first == second
    assert report.read_text() == first
    assert "timing_seconds" not in json.loads(first)
    assert len(json.loads(first)["input_digest"]) == 64


def test_rate_cap_exceeded(capsys, fixtures_dir):
    code, _, err = run(capsys, "rate", fixtures_dir / "six_vertex.graph", "--cap", "3")
    assert code == 3
    assert "[ERROR]" in err


def test_rate_cap_reaches_recursive_programs(capsys, fixtures_dir, monkeypatch):
    monkeypatch.setattr(Config, "RECURSIVE_CAP", 3)
    graph = fixtures_dir / "six_vertex.graph"
    assert run(capsys, "rate", graph, "--schemes", "local_partial", "--recursive")[0] == 3
    code, out, _ = run(capsys, "rate", graph, "--schemes", "local_partial", "--recursive", "--cap", "6", "--json")
    assert code == 0
    assert parse_rational(optima(out)["recursive_lp"]) <= Fraction(7, 2)


def test_rate_input_errors(capsys, fixtures_dir, tmp_path):
    assert run(capsys, "rate", tmp_path / "missing.graph")[0] == 2
    assert run(capsys, "rate", fixtures_dir / "k3.graph", "--schemes", "bogus")[0] == 2
    bad = tmp_path / "bad.graph"
    bad.write_text("3\n0 9\n")
    code, _, err = run(capsys, "rate", bad)
    assert code == 2
    assert "line 2" in err


def test_rate_rejects_non_ascii_input(capsys, tmp_path):
    binary = tmp_path / "binary.graph"
    binary.write_bytes(b"3\n0 1\n\xff\xfe 2\n")
    code, _, err = run(capsys, "rate", binary)
    assert code == 2
    assert "[ERROR]" in err
    superscript = tmp_path / "superscript.graph"
    superscript.write_text("3\n0 \u00b2\n", encoding="utf-8")
    code, _, err = run(capsys, "rate", superscript)
    assert code == 2
    assert "line 2" in err


# ===========================================
# BUILD / VERIFY / SIMULATE
# ===========================================

def test_build_verify_simulate(capsys, fixtures_dir, tmp_path):
    graph = fixtures_dir / "six_vertex.graph"
    matrix = tmp_path / "six_vertex.json"
    code, out, _ = run(capsys, "build", graph, "--scheme", "local_partial", "--seed", "7", "--out", matrix)
    assert code == 0
    assert "Result: PASS 6/6 vertices" in out
    assert matrix.exists()

    code, out, _ = run(capsys, "verify", graph, matrix)
    assert code == 0
    assert "Result: PASS 6/6 vertices" in out

    code, out, _ = run(capsys, "simulate", graph, matrix, "--trials", "5", "--width", "2")
    assert code == 0
    assert "Trials: 5/5" in out


def test_build_k3_json(capsys, fixtures_dir):
    code, out, _ = run(capsys, "build", fixtures_dir / "k3.graph", "--json")
    assert code == 0
    verification = json.loads(out)["verification"]
    assert verification["m_rows"] == 1
    assert verification["ell"] == 1
    assert verification["rate"] == "1"
    assert verification["passed"]


def test_build_fractional_rate(capsys, fixtures_dir):
    code, out, _ = run(capsys, "build", fixtures_dir / "six_vertex.graph", "--scheme", "fractional", "--json")
    assert code == 0
    assert json.loads(out)["verification"]["rate"] == "7/2"


def test_build_bad_scheme_is_usage_error(capsys, fixtures_dir):
    code, _, err = run(capsys, "build", fixtures_dir / "k3.graph", "--scheme", "nonsense")
    assert code == 1
    assert "[ERROR]" in err


def test_simulate_k3(capsys, fixtures_dir, tmp_path):
    matrix = tmp_path / "k3.json"
    run(capsys, "build", fixtures_dir / "k3.graph", "--out", matrix)
    code, out, _ = run(capsys, "simulate", fixtures_dir / "k3.graph", matrix, "--trials", "10")
    assert code == 0
    assert "Trials: 10/10" in out


def test_verify_against_wrong_graph(capsys, fixtures_dir, tmp_path):
    matrix = tmp_path / "k3.json"
    run(capsys, "build", fixtures_dir / "k3.graph", "--out", matrix)
    code, out, _ = run(capsys, "verify", fixtures_dir / "empty3.graph", matrix)
    assert code == 4
    assert "FAIL" in out


def test_verify_unreadable_matrix(capsys, fixtures_dir, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert run(capsys, "verify", fixtures_dir / "k3.graph", bad)[0] == 2


# ===========================================
# GIC
# ===========================================

def test_gic_check(capsys, fixtures_dir):
    code, out, _ = run(capsys, "gic", "check", fixtures_dir / "six_cycle.gic")
    assert code == 0
    assert "Valid: YES" in out
    code, out, _ = run(capsys, "gic", "check", fixtures_dir / "broken.gic")
    assert code == 4
    assert "[i_cycle]" in out


def test_gic_roundtrip(capsys, fixtures_dir):
    code, out, _ = run(capsys, "gic", "roundtrip", fixtures_dir / "six_cycle.gic", "--q", "7", "--trials", "3")
    assert code == 0
    assert "Round trips: 3/3" in out
    assert "Transmissions: 5 (expected 5)" in out


def test_gic_assign_json(capsys, fixtures_dir):
    code, out, _ = run(capsys, "gic", "assign", fixtures_dir / "shared_fan.gic", "--q", "5", "--json")
    assert code == 0
    gic = json.loads(out)["gic"]
    assert sorted(gic["vectors"]) == ["0", "1", "2", "3"]
    assert all(len(u) == 1 for u in gic["vectors"].values())
    assert gic["expected_transmissions"] == 2


def test_gic_generate(capsys, tmp_path):
    out_file = tmp_path / "g.gic"
    code, _, _ = run(capsys, "gic", "generate", "--n", "4", "--k", "1", "--max-path-len", "2", "--out", out_file)
    assert code == 0
    assert check_gic(read_gic_file(out_file)).valid


def test_gic_requires_subcommand(capsys):
    assert run(capsys, "gic")[0] == 1


# ===========================================
# ORACLES AND MISC
# ===========================================

def test_oracle_minrank(capsys, fixtures_dir):
    code, out, _ = run(capsys, "oracle", fixtures_dir / "c5_bidirectional.graph", "--which", "minrank", "--json")
    assert code == 0
    (oracle,) = json.loads(out)["oracles"]
    assert oracle["oracle"] == "minrank(GF(2))"
    assert oracle["value"] == "3"


def test_oracle_all(capsys, fixtures_dir):
    code, out, _ = run(capsys, "oracle", fixtures_dir / "k3.graph")
    assert code == 0
    assert "mais: 1" in out
    assert "partition:local_partial: 1" in out


def test_config_and_examples(capsys):
    code, out, _ = run(capsys, "config")
    assert code == 0
    assert "Configuration Status" in out
    code, out, _ = run(capsys, "examples")
    assert code == 0
    assert "USAGE EXAMPLES" in out


def test_no_command_prints_help(capsys):
    code, out, _ = run(capsys)
    assert code == 0
    assert "Available commands" in out or "usage" in out.lower()
