"""
Exhaustive reference solvers for small instances.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, List, Optional, Tuple

import numpy as np

from config import Config
from src.errors import CapExceededError, InputError
from src.fields.field_matrix import prime_field
from src.graphs.side_info_graph import Graph, VertexSet
from src.optimization.cover_programs import CLIQUE_PROGRAMS, CoverSet, program_value
from src.optimization.rational_simplex import LpProblem, LpResult, LpStatus, solve_lp

logger = logging.getLogger(__name__)

PARTITION_PROGRAMS = ("local_chromatic", "partial_clique", "ak", "local_partial", "clique_cover")


@dataclass
class OracleResult:
    name: str
    value: Fraction
    witness: List = field(default_factory=list)
    enumerated: int = 0


# ===========================================
# MAXIMUM ACYCLIC INDUCED SUBGRAPH
# ===========================================

def mais(graph: Graph, cap: Optional[int] = None) -> OracleResult:
    """Largest vertex set inducing an acyclic subgraph (a lower bound on every rate)"""
    limit = Config.MAIS_CAP if cap is None else cap
    if graph.n > limit:
        raise CapExceededError("n", graph.n, limit)
    checked = 0
    for size in range(graph.n, 0, -1):
        for subset in combinations(range(graph.n), size):
            checked += 1
            if graph.is_acyclic(subset):
                return OracleResult("mais", Fraction(size), list(subset), checked)
    return OracleResult("mais", Fraction(0), [], checked)


# ===========================================
# MINRANK
# ===========================================

def minrank_bruteforce(graph: Graph, q: int = 2, cap: Optional[int] = None) -> OracleResult:
    """
    Minimum rank over GF(q) of matrices with unit diagonal whose (i, j)
    entry may be nonzero only for edges i -> j. Stops early once the MAIS
    lower bound is reached.
    """
    field_cls = prime_field(q)
    edges = graph.edges()
    limit = Config.MINRANK_CAP if cap is None else cap
    total = q ** len(edges)
    if total > limit:
        raise CapExceededError("q^|E|", total, limit)
    if graph.n == 0:
        return OracleResult("minrank", Fraction(0), [], 0)

    floor = int(mais(graph).value)
    base = np.eye(graph.n, dtype=np.int64)
    best, witness, checked = graph.n, base.tolist(), 0
    for values in product(range(q), repeat=len(edges)):
        checked += 1
        a = base.copy()
        for (i, j), x in zip(edges, values):
            a[i, j] = x
        r = int(np.linalg.matrix_rank(field_cls(a)))
        if r < best:
            best, witness = r, a.tolist()
            if best == floor:
                break
    logger.debug("minrank over GF(%d): %d after %d matrices", q, best, checked)
    return OracleResult("minrank", Fraction(best), witness, checked)


# ===========================================
# PARTITION OPTIMUM
# ===========================================

def set_partitions(n: int) -> Iterator[List[VertexSet]]:
    """All set partitions of 0..n-1 via restricted growth strings"""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def extend(i: int, blocks: int):
        if i == n:
            parts = [[] for _ in range(blocks)]
            for v, b in enumerate(labels):
                parts[b].append(v)
            yield [tuple(p) for p in parts]
            return
        for b in range(blocks + 1):
            labels[i] = b
            yield from extend(i + 1, max(blocks, b + 1))

    labels[0] = 0
    yield from extend(1, 1)


def exhaustive_partition_optimum(graph: Graph, program: str, cap: Optional[int] = None) -> OracleResult:
    """
    Integer optimum of a covering program by enumerating vertex partitions.
    Shrinking a set never raises its partial-clique degree or any
    coefficient, so some optimal cover is a partition.
    """
    if program not in PARTITION_PROGRAMS:
        raise InputError(f"partition oracle supports {', '.join(PARTITION_PROGRAMS)}, not {program!r}")
    if graph.n == 0:
        raise InputError("partition oracle needs at least one vertex")
    limit = Config.PARTITION_CAP if cap is None else cap
    if graph.n > limit:
        raise CapExceededError("n", graph.n, limit)

    best: Optional[Fraction] = None
    witness: List[VertexSet] = []
    checked = 0
    for partition in set_partitions(graph.n):
        if program in CLIQUE_PROGRAMS and not all(graph.is_clique(b) for b in partition):
            continue
        checked += 1
        sets = []
        for block in partition:
            k = graph.partial_clique_degree(block)
            sets.append(CoverSet(block, k, Fraction(1), Fraction(k + 1)))
        value = program_value(graph, program, sets)
        if best is None or value < best:
            best, witness = value, partition
    return OracleResult(f"partition:{program}", best, [list(b) for b in witness], checked)


# ===========================================
# EXHAUSTIVE ILP
# ===========================================

def exhaustive_ilp(problem: LpProblem, cap: Optional[int] = None) -> LpResult:
    """Enumerate every 0/1 assignment of the binaries; the rest is an LP"""
    binaries = [j for j, is_binary in enumerate(problem.binary) if is_binary]
    limit = Config.ILP_ENUM_CAP if cap is None else cap
    if len(binaries) > limit:
        raise CapExceededError("binary variables", len(binaries), limit)

    best: Optional[LpResult] = None
    pivots = 0
    unbounded = False
    for values in product((0, 1), repeat=len(binaries)):
        fixed = {j: Fraction(x) for j, x in zip(binaries, values)}
        result = solve_lp(problem.with_bounds(fixed))
        pivots += result.pivots
        if result.status == LpStatus.UNBOUNDED:
            unbounded = True
            break
        if result.is_optimal and (best is None or result.optimum < best.optimum):
            best = result
    if unbounded:
        return LpResult(LpStatus.UNBOUNDED, pivots=pivots)
    if best is None:
        return LpResult(LpStatus.INFEASIBLE, pivots=pivots)
    best.pivots = pivots
    return best


def oracle_rates(graph: Graph) -> List[Tuple[str, Fraction]]:
    """MAIS lower bound plus every partition-program optimum"""
    rows = [("mais", mais(graph).value)]
    rows.extend((p, exhaustive_partition_optimum(graph, p).value) for p in PARTITION_PROGRAMS)
    return rows
