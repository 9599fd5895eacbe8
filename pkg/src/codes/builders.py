"""
Encoding-matrix synthesis from covers.

Two-level construction: every covering set (slot) gets an inner code
(a Vandermonde [n_j, k_j + 1] block, or a nested recursive code), and a
global Vandermonde Phi mixes the inner codes, G = [Phi_1 G_1 ... Phi_t G_t].
Candidates are drawn with a seeded RNG and verified; after ALPHA_RETRIES
failures the field size is doubled.
"""

import logging
import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from config import Config
from src.codes.encoding_matrix import EncodingMatrix, verify_alignment
from src.errors import CodeConstructionError, FieldError, InfeasibleCoverError, InputError
from src.fields.field_matrix import (
    FieldMatrix,
    distinct_points,
    power_matrix,
    smallest_prime_at_least,
    vandermonde,
)
from src.graphs.side_info_graph import Graph, VertexSet
from src.optimization.cover_programs import Cover, CoverSet, cover_load, program_value
from src.optimization.recursive_programs import RecursionNode, RecursionResult

logger = logging.getLogger(__name__)


class _CandidateRejected(Exception):
    """A sampled candidate failed verification"""


@dataclass
class _Slot:
    """One fractional copy of a covering set, shrunk to the vertices it keeps"""

    members: VertexSet
    source: VertexSet  # the cover set it was copied from


@dataclass
class _Code:
    G: FieldMatrix
    assign: Dict[int, List[int]]
    ell: int


# ===========================================
# SLOTS
# ===========================================

def cover_slots(cover: Cover) -> Tuple[int, List[_Slot]]:
    """
    Delta and the slot list: a set of weight N/Delta yields N slots; each
    vertex keeps its first Delta slot memberships in canonical order.
    """
    delta = cover.common_denominator
    remaining = {v: delta for v in range(cover.n)}
    slots = []
    for s in cover.sets:
        copies = s.weight * delta
        if copies.denominator != 1:
            raise InfeasibleCoverError(f"weight {s.weight} does not divide into Delta={delta}")
        for _ in range(int(copies)):
            kept = tuple(v for v in s.members if remaining[v] > 0)
            for v in kept:
                remaining[v] -= 1
            if kept:
                slots.append(_Slot(kept, s.members))
    short = [v for v, r in remaining.items() if r > 0]
    if short:
        raise InfeasibleCoverError(f"vertices {short} are not fully covered")
    return delta, slots


def _check_rows(graph: Graph, cover: Cover, delta: int) -> int:
    cover.validate(graph)
    worst = max(cover_load(graph, cover, v) for v in range(graph.n))
    if cover.objective < worst:
        raise InfeasibleCoverError(f"objective {cover.objective} is below the local load {worst}")
    rows = cover.objective * delta
    if rows.denominator != 1:
        raise InfeasibleCoverError(f"objective {cover.objective} times Delta={delta} is not an integer")
    return int(rows)


# ===========================================
# NESTED TWO-LEVEL ENGINE
# ===========================================

def _inner_code(graph: Graph, node: RecursionNode, slot: _Slot, p: int, rng: random.Random) -> _Code:
    child = node.children.get(slot.source)
    if child is not None:
        code = _build_node(child, p, rng, check=True)
        local = {v: i for i, v in enumerate(slot.source)}
        picked = [c for v in slot.members for c in code.assign[local[v]]]
        G = code.G.columns(picked)
        assign, col = {}, 0
        for v in slot.members:
            assign[v] = list(range(col, col + code.ell))
            col += code.ell
        return _Code(G, assign, code.ell)

    k = graph.partial_clique_degree(slot.members)
    alphas = distinct_points(len(slot.members), p, rng)
    G = vandermonde(len(slot.members), k + 1, alphas, p)
    return _Code(G, {v: [i] for i, v in enumerate(slot.members)}, 1)


def _replicate(code: _Code, copies: int) -> _Code:
    """I_copies (x) inner code, each member gaining copies * ell columns"""
    if copies == 1:
        return code
    G = FieldMatrix.block_diagonal([code.G] * copies)
    assign = {
        v: [c + r * code.G.cols for r in range(copies) for c in cols]
        for v, cols in code.assign.items()
    }
    return _Code(G, assign, code.ell * copies)


def _build_node(node: RecursionNode, p: int, rng: random.Random, check: bool = False) -> _Code:
    graph, cover = node.graph, node.cover
    delta, slots = cover_slots(cover)
    inner = [_inner_code(graph, node, slot, p, rng) for slot in slots]
    pad = math.lcm(*(code.ell for code in inner))
    inner = [_replicate(code, pad // code.ell) for code in inner]

    rows = cover.objective * delta * pad
    if rows.denominator != 1:
        raise InfeasibleCoverError(f"row count {rows} is not an integer")
    dims = [code.G.rows for code in inner]
    phi = power_matrix(int(rows), distinct_points(sum(dims), p, rng), p)

    blocks, assign, offset, start = [], {v: [] for v in range(graph.n)}, 0, 0
    for code, dim in zip(inner, dims):
        blocks.append(phi.columns(range(start, start + dim)) @ code.G)
        start += dim
        for v, cols in code.assign.items():
            assign[v].extend(offset + c for c in cols)
        offset += code.G.cols
    G = FieldMatrix.hstack(blocks)

    ell = delta * pad
    # a vertex's columns are ordered block by block
    order = [c for v in range(graph.n) for c in assign[v]]
    G = G.columns(order)
    final_assign, col = {}, 0
    for v in range(graph.n):
        final_assign[v] = list(range(col, col + ell))
        col += ell

    e = EncodingMatrix(p, G, {v: tuple(c) for v, c in final_assign.items()}, ell, delta, "recursive")
    if check and not verify_alignment(e, graph).ok:
        raise _CandidateRejected()
    return _Code(G, final_assign, ell)


def _search(
    n: int,
    seed: int,
    attempt: Callable[[int, random.Random], EncodingMatrix],
    graph: Graph,
    start_prime: Optional[int] = None,
) -> EncodingMatrix:
    """Seeded randomize-and-verify with field growth"""
    p = start_prime or smallest_prime_at_least(max(2 * n + 1, Config.MIN_PRIME))
    rng = random.Random(seed)
    tried = []
    for _ in range(Config.FIELD_GROWTH_LIMIT + 1):
        tried.append(p)
        for retry in range(Config.ALPHA_RETRIES):
            try:
                e = attempt(p, rng)
            except _CandidateRejected:
                continue
            except FieldError as exc:
                logger.debug("GF(%d) too small: %s", p, exc)
                break
            report = verify_alignment(e, graph)
            if report.ok:
                logger.info("verified %s code over GF(%d) after %d retries", e.scheme, p, retry)
                return replace(e, functionals=report.functionals, seed=seed)
        logger.info("no verified candidate over GF(%d); doubling the field", p)
        p = smallest_prime_at_least(2 * p)
    raise CodeConstructionError(
        "alignment never verified within the retry budget",
        {"primes_tried": tried, "retries_per_field": Config.ALPHA_RETRIES},
    )


# ===========================================
# PUBLIC BUILDERS
# ===========================================

def _require_plain_caps(cover: Cover):
    if any(s.cap != s.k + 1 for s in cover.sets):
        raise InputError("cover uses recursive coefficients; use build_recursive_code_matrix")


def build_code_matrix(graph: Graph, cover: Cover, seed: int = 0) -> EncodingMatrix:
    """Two-level code for an integer cover; m_rows = cover objective"""
    if not cover.is_integral:
        raise InfeasibleCoverError("build_code_matrix needs an integer cover")
    _require_plain_caps(cover)
    _check_rows(graph, cover, 1)
    node = RecursionNode(graph, cover, False)

    def attempt(p, rng):
        code = _build_node(node, p, rng)
        return EncodingMatrix(p, code.G, _tuples(code.assign), code.ell, 1, "main")

    return _search(graph.n, seed, attempt, graph)


def build_fractional_code_matrix(graph: Graph, cover: Cover, seed: int = 0) -> EncodingMatrix:
    """Delta-fold split code: (Delta * t) x (Delta * n), ell = Delta"""
    _require_plain_caps(cover)
    delta = cover.common_denominator
    _check_rows(graph, cover, delta)
    node = RecursionNode(graph, cover, True)

    def attempt(p, rng):
        code = _build_node(node, p, rng)
        return EncodingMatrix(p, code.G, _tuples(code.assign), code.ell, delta, "fractional")

    return _search(graph.n, seed, attempt, graph)


def build_recursive_code_matrix(graph: Graph, tree, seed: int = 0) -> EncodingMatrix:
    """Nested code following a recursion tree (RecursionResult or RecursionNode)"""
    root: RecursionNode = tree.tree if isinstance(tree, RecursionResult) else tree
    if root.graph.adjacency_key() != graph.adjacency_key():
        raise InputError("recursion tree was computed for a different graph")
    delta = root.cover.common_denominator

    def attempt(p, rng):
        code = _build_node(root, p, rng)
        return EncodingMatrix(p, code.G, _tuples(code.assign), code.ell, delta, "recursive")

    return _search(graph.n, seed, attempt, graph)


def _tuples(assign: Dict[int, List[int]]) -> Dict[int, Tuple[int, ...]]:
    return {v: tuple(cols) for v, cols in assign.items()}


# ===========================================
# IDENTITY-BASIS SCHEME
# ===========================================

def _first_cover_partition(graph: Graph, cover: Cover) -> List[VertexSet]:
    seen, parts = set(), []
    for s in cover.sets:
        kept = tuple(v for v in s.members if v not in seen)
        seen.update(kept)
        if kept:
            parts.append(kept)
    return parts


def assign_basis_columns(graph: Graph, parts: List[VertexSet], m: int) -> Optional[List[List[int]]]:
    """
    Greedy choice of identity columns for each part so that, at every
    vertex, the parts not inside its neighborhood use disjoint columns.
    Returns None when the greedy pass runs out of columns.
    """
    visible = [
        {j for j, part in enumerate(parts) if not all(u in graph.out_adj[v] for u in part)}
        for v in range(graph.n)
    ]
    chosen: List[List[int]] = []
    for j, part in enumerate(parts):
        need = graph.partial_clique_degree(part) + 1
        forbidden = set()
        for seen in visible:
            if j in seen:
                for i in seen:
                    if i < j:
                        forbidden.update(chosen[i])
        free = [c for c in range(m) if c not in forbidden]
        if len(free) < need:
            return None
        chosen.append(free[:need])
    return chosen


def build_ak_code_matrix(graph: Graph, cover: Cover, seed: int = 0) -> EncodingMatrix:
    """
    Code for an integer cover of the ak program using identity columns
    for Phi; the field only needs max_j n_j points.
    """
    if not cover.is_integral:
        raise InfeasibleCoverError("build_ak_code_matrix needs an integer cover")
    _require_plain_caps(cover)
    cover.validate(graph)
    parts = _first_cover_partition(graph, cover)
    m = cover.objective
    if m.denominator != 1:
        raise InfeasibleCoverError(f"objective {m} is not an integer")
    m = int(m)
    need = program_value(graph, "ak", [_unit(graph, part) for part in parts])
    if need > m:
        raise InfeasibleCoverError(f"objective {m} is below the ak load {need}")

    basis = assign_basis_columns(graph, parts, m)

    def attempt_identity(p, rng):
        eye = FieldMatrix.identity(p, m)
        return _assemble(graph, parts, [eye.columns(cols) for cols in basis], p, rng, "ak")

    def attempt_random(p, rng):
        phis = [FieldMatrix.random(p, m, graph.partial_clique_degree(part) + 1, rng) for part in parts]
        return _assemble(graph, parts, phis, p, rng, "ak")

    if basis is not None:
        largest = max(len(part) for part in parts)
        try:
            return _search(graph.n, seed, attempt_identity, graph, start_prime=smallest_prime_at_least(largest))
        except CodeConstructionError:
            logger.warning("identity-basis code did not verify; falling back to random Phi")
    else:
        logger.warning("greedy basis assignment failed for %d parts and m=%d; using random Phi", len(parts), m)
    return _search(graph.n, seed, attempt_random, graph)


def _unit(graph: Graph, part: VertexSet):
    k = graph.partial_clique_degree(part)
    return CoverSet(part, k, Fraction(1), Fraction(k + 1))


def _assemble(graph, parts, phis, p, rng, scheme) -> EncodingMatrix:
    blocks, assign, col = [], {}, 0
    for part, phi in zip(parts, phis):
        k = graph.partial_clique_degree(part)
        inner = vandermonde(len(part), k + 1, distinct_points(len(part), p, rng), p)
        blocks.append(phi @ inner)
        for i, v in enumerate(part):
            assign[v] = (col + i,)
        col += len(part)
    G = FieldMatrix.hstack(blocks)
    order = [assign[v][0] for v in range(graph.n)]
    return EncodingMatrix(p, G.columns(order), {v: (v,) for v in range(graph.n)}, 1, 1, scheme)
