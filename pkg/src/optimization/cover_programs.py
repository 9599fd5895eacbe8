"""
Covering programs over vertex subsets of a side-information graph.

Every program selects weights rho_S for candidate sets S (all nonempty
subsets, or only cliques) subject to the covering constraint
sum_{S containing v} rho_S >= 1 for every vertex v.

    local_chromatic   cliques only;   sum_{S not inside N(v)} rho_S <= t
    partial_clique    minimize sum (k_S + 1) rho_S
    ak                sum_{S not inside N(v)} (k_S + 1) rho_S <= t
    local_partial     sum min(|S & closedNonNbr(v)|, k_S + 1) rho_S <= t
    local_partial_lp  local_partial with rho in [0, 1]
    clique_cover      cliques only; minimize sum rho_S
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from config import Config
from src.errors import CapExceededError, InfeasibleCoverError, InputError, LpError
from src.graphs.side_info_graph import Graph, VertexSet, nonempty_subsets, vertex_set
from src.optimization.branch_and_bound import solve_ilp
from src.optimization.rational_simplex import LpProblem, LpResult, LpStatus, Sense, solve_lp

logger = logging.getLogger(__name__)

MIN_MAX_PROGRAMS = ("local_chromatic", "ak", "local_partial", "local_partial_lp")
SUM_PROGRAMS = ("partial_clique", "clique_cover")
PROGRAMS = MIN_MAX_PROGRAMS + SUM_PROGRAMS
CLIQUE_PROGRAMS = ("local_chromatic", "clique_cover")


@dataclass(frozen=True)
class CandidateSet:
    members: VertexSet
    k: int
    cap: Fraction  # per-vertex coefficient ceiling: k + 1, or a recursive optimum

    def __contains__(self, v: int) -> bool:
        return v in self.members


@dataclass(frozen=True)
class CoverSet:
    members: VertexSet
    k: int
    weight: Fraction
    cap: Fraction

    def sort_key(self):
        return self.members


@dataclass(frozen=True)
class Cover:
    """Selected sets (weight > 0) in canonical order plus the objective t"""

    n: int
    program: str
    relaxed: bool
    sets: Tuple[CoverSet, ...]
    objective: Fraction

    @property
    def is_integral(self) -> bool:
        return all(s.weight == 1 for s in self.sets)

    @property
    def common_denominator(self) -> int:
        """Delta: lcm of the weight denominators"""
        return lcm(*(s.weight.denominator for s in self.sets)) if self.sets else 1

    def covering_sets(self, v: int) -> List[CoverSet]:
        return [s for s in self.sets if v in s.members]

    def validate(self, graph: Graph) -> "Cover":
        """Re-check covering, weight domain and partial-clique degrees against graph"""
        if graph.n != self.n:
            raise InfeasibleCoverError(f"cover is for n={self.n}, graph has n={graph.n}")
        for s in self.sets:
            if not s.members or any(not 0 <= v < self.n for v in s.members):
                raise InfeasibleCoverError(f"set {s.members} is not a vertex subset")
            k = graph.partial_clique_degree(s.members)
            if k != s.k:
                raise InfeasibleCoverError(f"set {s.members} has k={k}, cover says {s.k}")
            if not 0 < s.weight <= 1:
                raise InfeasibleCoverError(f"set {s.members} has weight {s.weight} outside (0, 1]")
            if not self.relaxed and s.weight != 1:
                raise InfeasibleCoverError(f"integer cover has fractional weight {s.weight}")
            if not 1 <= s.cap <= s.k + 1:
                raise InfeasibleCoverError(f"set {s.members} has coefficient cap {s.cap}")
            if self.program in CLIQUE_PROGRAMS and s.k != 0:
                raise InfeasibleCoverError(f"set {s.members} is not a clique")
        for v in range(self.n):
            if sum((s.weight for s in self.covering_sets(v)), Fraction(0)) < 1:
                raise InfeasibleCoverError(f"vertex {v} is not covered")
        value = program_value(graph, self.program, self.sets)
        if value > self.objective:
            raise InfeasibleCoverError(f"objective {self.objective} is below the program value {value}")
        return self


# ===========================================
# COEFFICIENTS
# ===========================================

def vertex_coefficient(program: str, graph: Graph, members: VertexSet, cap: Fraction, v: int) -> Fraction:
    """Coefficient of rho_S in vertex v's load row"""
    if program in ("local_partial", "local_partial_lp"):
        non_nbrs = sum(1 for u in members if u not in graph.out_adj[v])
        return min(Fraction(non_nbrs), cap)
    if program in ("local_chromatic", "ak"):
        inside = all(u in graph.out_adj[v] for u in members)
        return Fraction(0) if inside else cap
    raise LpError(f"program {program!r} has no per-vertex rows")


def set_cost(program: str, cap: Fraction) -> Fraction:
    return Fraction(1) if program == "clique_cover" else cap


def program_value(graph: Graph, program: str, sets: Sequence) -> Fraction:
    """Objective of a weighted family (CoverSet-like items) under a program"""
    if program in SUM_PROGRAMS:
        return sum((set_cost(program, s.cap) * s.weight for s in sets), Fraction(0))
    return max(
        (
            sum((vertex_coefficient(program, graph, s.members, s.cap, v) * s.weight for s in sets), Fraction(0))
            for v in range(graph.n)
        ),
        default=Fraction(0),
    )


# ===========================================
# PROGRAM CONSTRUCTION
# ===========================================

@dataclass
class CoverProgram(LpProblem):
    """LpProblem whose first variables are candidate sets (t last, if present)"""

    program: str = ""
    candidates: List[CandidateSet] = field(default_factory=list)
    t_index: Optional[int] = None


def candidate_sets(
    graph: Graph,
    program: str,
    caps: Optional[Callable[[VertexSet, int], Fraction]] = None,
) -> List[CandidateSet]:
    cliques_only = program in CLIQUE_PROGRAMS
    result = []
    for members in nonempty_subsets(graph.n):
        k = graph.partial_clique_degree(members)
        if cliques_only and k != 0:
            continue
        cap = caps(members, k) if caps else Fraction(k + 1)
        result.append(CandidateSet(members, k, Fraction(cap)))
    return result


def prune_dominated(graph: Graph, program: str, candidates: List[CandidateSet]) -> List[CandidateSet]:
    """
    Drop S when some S + {x} is a candidate with the same k, cost and
    per-vertex coefficients; replacing S by the superset never hurts.
    """
    by_members = {c.members: c for c in candidates}

    def signature(c: CandidateSet):
        if program in SUM_PROGRAMS:
            return (c.k, set_cost(program, c.cap))
        return (c.k, tuple(vertex_coefficient(program, graph, c.members, c.cap, v) for v in range(graph.n)))

    kept = []
    for c in candidates:
        own = signature(c)
        dominated = False
        for x in range(graph.n):
            if x in c.members:
                continue
            bigger = by_members.get(vertex_set(c.members + (x,)))
            if bigger is not None and signature(bigger) == own:
                dominated = True
                break
        if not dominated:
            kept.append(c)
    logger.debug("pruned %d of %d candidate sets", len(candidates) - len(kept), len(candidates))
    return kept


def build_program(
    graph: Graph,
    which: str,
    relaxed: bool = False,
    prune: Optional[bool] = None,
    cap: Optional[int] = None,
    caps: Optional[Callable[[VertexSet, int], Fraction]] = None,
) -> CoverProgram:
    """
    One variable per candidate set (plus t for the min-max programs).

    Args:
        graph: side-information graph (n >= 1)
        which: one of PROGRAMS
        relaxed: rho in [0, 1] instead of {0, 1}; forced for local_partial_lp
        prune: dominated-set elimination (default Config.PRUNE_DOMINATED)
        cap: maximum n (default Config.SUBSET_CAP)
        caps: override for the per-set coefficient ceiling (recursive programs)

    Returns:
        CoverProgram
    """
    if which not in PROGRAMS:
        raise InputError(f"unknown program {which!r}; choose from {', '.join(PROGRAMS)}")
    if graph.n == 0:
        raise InputError("covering programs need at least one vertex")
    limit = Config.SUBSET_CAP if cap is None else cap
    if graph.n > limit:
        raise CapExceededError("n", graph.n, limit)
    relaxed = relaxed or which == "local_partial_lp"
    prune = Config.PRUNE_DOMINATED if prune is None else prune

    candidates = candidate_sets(graph, which, caps)
    if prune:
        candidates = prune_dominated(graph, which, candidates)

    problem = CoverProgram(
        name=f"{which}{'_relaxed' if relaxed and which != 'local_partial_lp' else ''}",
        program=which,
        candidates=candidates,
        integral_objective=caps is None or all(c.cap.denominator == 1 for c in candidates),
    )
    min_max = which in MIN_MAX_PROGRAMS
    for c in candidates:
        name = "S{" + ",".join(map(str, c.members)) + "}"
        cost = 0 if min_max else set_cost(which, c.cap)
        if relaxed:
            problem.add_variable(name, cost, lower=0, upper=1)
        else:
            problem.add_variable(name, cost, binary=True)

    if min_max:
        problem.t_index = problem.add_variable("t", 1, lower=0)
        for v in range(graph.n):
            row = {}
            for j, c in enumerate(candidates):
                coeff = vertex_coefficient(which, graph, c.members, c.cap, v)
                if coeff:
                    row[j] = coeff
            row[problem.t_index] = -1
            problem.add_constraint(row, Sense.LE, 0, name=f"load[{v}]")

    for v in range(graph.n):
        problem.add_constraint(
            {j: 1 for j, c in enumerate(candidates) if v in c.members}, Sense.GE, 1, name=f"cover[{v}]"
        )
    return problem


def cover_from_result(graph: Graph, problem: CoverProgram, result: LpResult, relaxed: bool) -> Cover:
    if result.status != LpStatus.OPTIMAL:
        raise LpError(f"program {problem.name!r} is {result.status.value}")
    sets = tuple(
        sorted(
            (
                CoverSet(c.members, c.k, result.assignment[j], c.cap)
                for j, c in enumerate(problem.candidates)
                if result.assignment[j] > 0
            ),
            key=CoverSet.sort_key,
        )
    )
    return Cover(graph.n, problem.program, relaxed, sets, result.optimum)


def solve_program(
    graph: Graph,
    which: str,
    relaxed: bool = False,
    prune: Optional[bool] = None,
    cap: Optional[int] = None,
) -> Cover:
    """Build and solve a covering program; the returned cover is re-validated"""
    problem = build_program(graph, which, relaxed=relaxed, prune=prune, cap=cap)
    is_relaxed = not any(problem.binary)
    result = solve_lp(problem) if is_relaxed else solve_ilp(problem)
    cover = cover_from_result(graph, problem, result, is_relaxed)
    logger.info("%s on n=%d: optimum %s with %d sets", problem.name, graph.n, cover.objective, len(cover.sets))
    return cover.validate(graph)


def format_rational(value: Fraction) -> str:
    """'p/q', or 'p' for integers"""
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def cover_load(graph: Graph, cover: Cover, v: int) -> Fraction:
    """Local-partial load of v: sum of min(|S & closedNonNbr(v)|, cap) * rho"""
    return sum(
        (vertex_coefficient("local_partial", graph, s.members, s.cap, v) * s.weight for s in cover.sets),
        Fraction(0),
    )


def manual_cover(graph: Graph, program: str, weighted_sets: Dict[VertexSet, Fraction], relaxed: bool = True) -> Cover:
    """Cover from explicit weights (objective computed from the program)"""
    sets = []
    for members, weight in weighted_sets.items():
        members = vertex_set(members)
        k = graph.partial_clique_degree(members)
        sets.append(CoverSet(members, k, Fraction(weight), Fraction(k + 1)))
    sets.sort(key=CoverSet.sort_key)
    objective = program_value(graph, program, sets)
    return Cover(graph.n, program, relaxed, tuple(sets), objective).validate(graph)
