"""
Index Coding Workflow
Command steps behind the CLI: each step loads its inputs, runs the solvers,
builders or oracles, and returns a RunReport. format_* turns reports into
the text the CLI prints.
"""

import logging
import random
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from src.codes.builders import (
    build_ak_code_matrix,
    build_code_matrix,
    build_fractional_code_matrix,
    build_recursive_code_matrix,
)
from src.codes.encoding_matrix import EncodingMatrix, random_data, round_trip, verify_alignment
from src.codes.serialization import load_matrix, save_matrix
from src.errors import InputError
from src.gic.generator import generate_gic
from src.gic.gic_code import build_gic_code, expected_count, gic_encode, gic_round_trip
from src.gic.structure import GicStructure, check_gic, read_gic_file, serialize_gic, subtree_coincidence_check
from src.graphs.graph_io import read_graph_file, to_dot
from src.graphs.side_info_graph import Graph
from src.optimization.cover_programs import PROGRAMS, Cover, format_rational, solve_program
from src.optimization.recursive_programs import solve_recursive
from src.oracles.brute_force import exhaustive_partition_optimum, mais, minrank_bruteforce
from src.reports.run_report import (
    CoverSetModel,
    GicSummary,
    OracleSummary,
    RunReport,
    SchemeResult,
    SimulationSummary,
    VerificationSummary,
    VertexCheck,
    file_digest,
)

logger = logging.getLogger(__name__)

INTEGER_PROGRAMS = ("local_chromatic", "partial_clique", "ak", "local_partial", "clique_cover")
BUILD_SCHEMES = ("main", "local_partial", "fractional", "local_partial_lp", "recursive", "ak")
ORACLES = ("minrank", "mais", "partition", "all")


def _load_graph(path) -> Tuple[Graph, RunReport]:
    graph = read_graph_file(path)
    report = RunReport(command="", input_file=str(path), input_digest=file_digest(path), n=graph.n)
    return graph, report


def cover_model(cover: Cover) -> List[CoverSetModel]:
    return [
        CoverSetModel(members=list(s.members), k=s.k, weight=format_rational(s.weight), cap=format_rational(s.cap))
        for s in cover.sets
    ]


def scheme_result(name: str, cover: Cover, subproblems: Optional[int] = None) -> SchemeResult:
    return SchemeResult(
        scheme=name,
        relaxed=cover.relaxed,
        optimum=format_rational(cover.objective),
        sets=cover_model(cover),
        subproblems=subproblems,
    )


def verification_summary(e: EncodingMatrix, graph: Graph) -> VerificationSummary:
    report = verify_alignment(e, graph)
    return VerificationSummary(
        passed=report.ok,
        scheme=e.scheme,
        p=e.p,
        m_rows=e.m_rows,
        ell=e.ell,
        rate=format_rational(e.rate),
        rank=e.G.rank(),
        vertices=[
            VertexCheck(vertex=v, ok=r.ok, failing_columns=r.failing_columns) for v, r in report.vertices.items()
        ],
    )


# ===========================================
# RATE
# ===========================================

def rate_step(
    graph_path,
    schemes: Optional[Sequence[str]] = None,
    fractional: bool = False,
    recursive: bool = False,
    cap: Optional[int] = None,
    prune: Optional[bool] = None,
    dot_path=None,
) -> RunReport:
    """
    Optima of the selected covering programs.

    Args:
        graph_path: graph file
        schemes: program names (default: every integer program)
        fractional: add the LP relaxation of each program
        recursive: add the recursive LP and IP optima
        cap: maximum n for power-set enumeration
        prune: dominated-set elimination
        dot_path: optional DOT export of the graph with the local_partial cover

    Returns:
        RunReport
    """
    started = time.perf_counter()
    graph, report = _load_graph(graph_path)
    report.command = "rate"
    selected = list(schemes) if schemes else list(INTEGER_PROGRAMS)
    unknown = [s for s in selected if s not in PROGRAMS]
    if unknown:
        raise InputError(f"unknown scheme(s) {unknown}; choose from {', '.join(PROGRAMS)}")

    dot_cover = None
    for program in selected:
        if program != "local_partial_lp":
            cover = solve_program(graph, program, relaxed=False, prune=prune, cap=cap)
            report.schemes.append(scheme_result(program, cover))
            if program == "local_partial":
                dot_cover = cover
        if fractional or program == "local_partial_lp":
            name = "local_partial_lp" if program in ("local_partial", "local_partial_lp") else f"{program}_lp"
            if any(r.scheme == name for r in report.schemes):
                continue
            cover = solve_program(graph, program, relaxed=True, prune=prune, cap=cap)
            report.schemes.append(scheme_result(name, cover))

    if recursive:
        for is_fractional, name in ((True, "recursive_lp"), (False, "recursive_ip")):
            result = solve_recursive(graph, fractional=is_fractional, cap=cap, prune=prune)
            report.schemes.append(scheme_result(name, result.tree.cover, result.subproblems))

    if dot_path:
        Path(dot_path).write_text(to_dot(graph, dot_cover), encoding="utf-8")
        report.artifacts["dot"] = str(dot_path)
    report.timing_seconds = time.perf_counter() - started
    return report


# ===========================================
# BUILD / VERIFY / SIMULATE
# ===========================================

def build_matrix(graph: Graph, scheme: str, seed: int, cap: Optional[int] = None) -> Tuple[EncodingMatrix, SchemeResult]:
    """Solve the program behind a scheme and build its encoding matrix"""
    if scheme in ("main", "local_partial"):
        cover = solve_program(graph, "local_partial", cap=cap)
        return build_code_matrix(graph, cover, seed), scheme_result("local_partial", cover)
    if scheme in ("fractional", "local_partial_lp"):
        cover = solve_program(graph, "local_partial_lp", cap=cap)
        return build_fractional_code_matrix(graph, cover, seed), scheme_result("local_partial_lp", cover)
    if scheme == "recursive":
        result = solve_recursive(graph, fractional=True, cap=cap)
        e = build_recursive_code_matrix(graph, result, seed)
        return e, scheme_result("recursive_lp", result.tree.cover, result.subproblems)
    if scheme == "ak":
        cover = solve_program(graph, "ak", cap=cap)
        return build_ak_code_matrix(graph, cover, seed), scheme_result("ak", cover)
    raise InputError(f"unknown build scheme {scheme!r}; choose from {', '.join(BUILD_SCHEMES)}")


def build_step(graph_path, scheme: str, seed: int, out=None, cap: Optional[int] = None) -> RunReport:
    started = time.perf_counter()
    graph, report = _load_graph(graph_path)
    report.command = "build"
    report.seed = seed
    e, result = build_matrix(graph, scheme, seed, cap)
    report.schemes.append(result)
    report.verification = verification_summary(e, graph)
    report.success = report.verification.passed
    if out:
        save_matrix(e, out)
        report.artifacts["matrix"] = str(out)
    report.timing_seconds = time.perf_counter() - started
    return report


def verify_step(graph_path, matrix_path) -> RunReport:
    started = time.perf_counter()
    graph, report = _load_graph(graph_path)
    report.command = "verify"
    e = load_matrix(matrix_path)
    report.verification = verification_summary(e, graph)
    report.success = report.verification.passed
    report.timing_seconds = time.perf_counter() - started
    return report


def simulate_step(graph_path, matrix_path, trials: int, seed: int, width: int = 1) -> RunReport:
    """Random data through encode and decode at every vertex"""
    if trials < 1 or width < 1:
        raise InputError("trials and width must be positive")
    started = time.perf_counter()
    graph, report = _load_graph(graph_path)
    report.command = "simulate"
    report.seed = seed
    e = load_matrix(matrix_path)
    if e.n != graph.n:
        raise InputError(f"matrix assigns {e.n} vertices, graph has {graph.n}")
    rng = random.Random(seed)
    failures: Dict[str, List[int]] = {}
    passed = 0
    for trial in range(trials):
        wrong = round_trip(e, graph, random_data(e, rng, width))
        if wrong:
            failures[str(trial)] = wrong
        else:
            passed += 1
    report.simulation = SimulationSummary(trials=trials, passed=passed, width=width, seed=seed, failures=failures)
    report.success = passed == trials
    report.timing_seconds = time.perf_counter() - started
    return report


# ===========================================
# GIC
# ===========================================

def _gic_summary(s: GicStructure) -> GicSummary:
    check = check_gic(s)
    return GicSummary(
        valid=check.valid,
        n=s.n,
        k=s.k,
        vertices=s.graph.n,
        violations=[{"condition": v.condition, "message": v.message, "witness": v.witness} for v in check.violations],
        subtree_coincidence=subtree_coincidence_check(s) if check.valid else None,
    )


def _gic_report(command: str, path) -> Tuple[GicStructure, RunReport]:
    s = read_gic_file(path)
    report = RunReport(command=command, input_file=str(path), input_digest=file_digest(path), n=s.graph.n)
    report.gic = _gic_summary(s)
    report.success = report.gic.valid
    return s, report


def gic_check_step(gic_path) -> RunReport:
    _, report = _gic_report("gic check", gic_path)
    return report


def gic_assign_step(gic_path, q: int, seed: int) -> RunReport:
    s, report = _gic_report("gic assign", gic_path)
    report.seed = seed
    if not report.gic.valid:
        return report
    code = build_gic_code(s, q, seed)
    report.gic.q = q
    report.gic.vectors = {str(v): [int(x) for x in u.to_numpy().ravel()] for v, u in sorted(code.u.items())}
    report.gic.expected_transmissions = expected_count(s)
    return report


def gic_roundtrip_step(gic_path, q: int, seed: int, trials: int = 1) -> RunReport:
    if trials < 1:
        raise InputError("trials must be positive")
    started = time.perf_counter()
    s, report = _gic_report("gic roundtrip", gic_path)
    report.seed = seed
    if not report.gic.valid:
        return report
    code = build_gic_code(s, q, seed)
    rng = random.Random(seed)
    passed, count = 0, 0
    for _ in range(trials):
        data = {v: rng.randrange(q) for v in range(s.graph.n)}
        count = gic_encode(code, data).count
        if not gic_round_trip(code, data):
            passed += 1
    report.gic.q = q
    report.gic.transmissions = count
    report.gic.expected_transmissions = expected_count(s)
    report.gic.trials = trials
    report.gic.passed = passed
    report.success = passed == trials and count == expected_count(s)
    report.timing_seconds = time.perf_counter() - started
    return report


def gic_generate_step(n: int, k: int, max_path_len: int, seed: int, out=None) -> Tuple[RunReport, str]:
    s = generate_gic(n, k, max_path_len, seed)
    text = serialize_gic(s)
    report = RunReport(command="gic generate", n=s.graph.n, seed=seed)
    report.gic = _gic_summary(s)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        report.artifacts["gic"] = str(out)
    return report, text


# ===========================================
# ORACLES
# ===========================================

def oracle_step(graph_path, which: str, q: int = 2, program: str = "local_partial") -> RunReport:
    if which not in ORACLES:
        raise InputError(f"unknown oracle {which!r}; choose from {', '.join(ORACLES)}")
    started = time.perf_counter()
    graph, report = _load_graph(graph_path)
    report.command = "oracle"
    if which in ("mais", "all"):
        result = mais(graph)
        report.oracles.append(_oracle_summary(result))
    if which in ("minrank", "all"):
        result = minrank_bruteforce(graph, q)
        report.oracles.append(_oracle_summary(result, f"minrank(GF({q}))"))
    if which in ("partition", "all"):
        result = exhaustive_partition_optimum(graph, program)
        report.oracles.append(_oracle_summary(result))
    report.timing_seconds = time.perf_counter() - started
    return report


def _oracle_summary(result, name: Optional[str] = None) -> OracleSummary:
    return OracleSummary(
        oracle=name or result.name,
        value=format_rational(result.value),
        witness=result.witness,
        enumerated=result.enumerated,
    )


# ===========================================
# TEXT FORMATTING
# ===========================================

def format_rate_table(report: RunReport) -> str:
    """Comparison table of program optima"""
    width = max([len(r.scheme) for r in report.schemes] + [6])
    lines = [
        f"RATE COMPARISON FOR: {report.input_file} (n={report.n})",
        "",
        "=== OPTIMA ===",
        f"{'scheme'.ljust(width)}  {'form':<4}  optimum",
    ]
    for r in report.schemes:
        lines.append(f"{r.scheme.ljust(width)}  {'LP' if r.relaxed else 'IP':<4}  {r.optimum}")
    best = [r for r in report.schemes if r.scheme == "local_partial"]
    if best:
        lines.extend(["", "=== LOCAL PARTIAL CLIQUE COVER ==="])
        lines.extend(
            f"  {{{', '.join(map(str, s.members))}}}  k={s.k}  rho={s.weight}" for s in best[0].sets
        )
    return "\n".join(lines)


def format_verification(report: RunReport) -> str:
    v = report.verification
    failing = [c.vertex for c in v.vertices if not c.ok]
    lines = [
        f"ENCODING MATRIX CHECK FOR: {report.input_file}",
        "",
        "=== MATRIX ===",
        f"Scheme: {v.scheme}",
        f"Field: GF({v.p})",
        f"Shape: {v.m_rows} x {v.ell * len(v.vertices)} ({v.ell} column(s) per vertex)",
        f"Rank: {v.rank}",
        f"Rate: {v.rate}",
        "",
        "=== ALIGNMENT ===",
    ]
    for c in v.vertices:
        detail = "" if c.ok else f" (columns {c.failing_columns} aligned with interference)"
        lines.append(f"  vertex {c.vertex}: {'PASS' if c.ok else 'FAIL'}{detail}")
    lines.append(f"Result: {'PASS' if v.passed else 'FAIL'} {len(v.vertices) - len(failing)}/{len(v.vertices)} vertices")
    return "\n".join(lines)


def format_simulation(report: RunReport) -> str:
    sim = report.simulation
    lines = [
        f"SIMULATION FOR: {report.input_file}",
        "",
        f"Trials: {sim.passed}/{sim.trials} decoded at every vertex (width {sim.width}, seed {sim.seed})",
    ]
    for trial, wrong in sorted(sim.failures.items(), key=lambda item: int(item[0]))[:5]:
        lines.append(f"  trial {trial}: wrong at vertices {wrong}")
    return "\n".join(lines)


def format_gic(report: RunReport) -> str:
    g = report.gic
    lines = [
        f"GIC STRUCTURE: {report.input_file or 'generated'}",
        "",
        "=== STRUCTURE ===",
        f"Inner vertices: {g.n}",
        f"Total vertices: {g.vertices}",
        f"k: {g.k}",
        f"Valid: {'YES' if g.valid else 'NO'}",
    ]
    for v in g.violations:
        lines.append(f"  [{v['condition']}] {v['message']} witness={v['witness']}")
    if g.subtree_coincidence is not None:
        lines.append(f"Subtree coincidence: {'YES' if g.subtree_coincidence else 'NO'}")
    if g.q is not None:
        lines.extend(["", "=== CODE ===", f"Field: GF({g.q})"])
    if g.vectors:
        lines.extend(f"  u[{v}] = {vec}" for v, vec in g.vectors.items())
    if g.expected_transmissions is not None:
        sent = g.transmissions if g.transmissions is not None else g.expected_transmissions
        lines.append(f"Transmissions: {sent} (expected {g.expected_transmissions})")
    if g.trials is not None:
        lines.append(f"Round trips: {g.passed}/{g.trials}")
    return "\n".join(lines)


def format_oracles(report: RunReport) -> str:
    lines = [f"ORACLES FOR: {report.input_file} (n={report.n})", ""]
    for o in report.oracles:
        lines.append(f"{o.oracle}: {o.value}  (enumerated {o.enumerated})")
        lines.append(f"  witness: {o.witness}")
    return "\n".join(lines)
