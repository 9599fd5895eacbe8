"""
Recursive local partial clique covers.

The per-set ceiling k_S + 1 of the local_partial program is replaced by the
optimum of the same program on the induced subgraph G|_S. Singletons cost 1;
the whole vertex set keeps k_V + 1 (the set itself is the base scheme).
Sets with k_S <= 1 keep k_S + 1, which is already their optimum.
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterator, Optional, Tuple

from config import Config
from src.errors import CapExceededError, InputError
from src.graphs.side_info_graph import Graph, VertexSet
from src.optimization.branch_and_bound import solve_ilp
from src.optimization.cover_programs import Cover, CoverSet, build_program, cover_from_result
from src.optimization.rational_simplex import solve_lp

logger = logging.getLogger(__name__)


@dataclass
class RecursionNode:
    """Optimal cover of one (relabeled) induced subgraph and its nested children"""

    graph: Graph
    cover: Cover
    fractional: bool
    # keyed by local member tuples of selected sets whose ceiling came from recursion
    children: Dict[VertexSet, "RecursionNode"] = field(default_factory=dict)

    @property
    def optimum(self) -> Fraction:
        return self.cover.objective

    def walk(self) -> Iterator["RecursionNode"]:
        yield self
        for child in self.children.values():
            yield from child.walk()

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children.values()), default=0)


@dataclass
class RecursionResult:
    optimum: Fraction
    tree: RecursionNode
    subproblems: int


class MemoTable:
    """Atomic get-or-compute map shared by recursive subproblems"""

    def __init__(self):
        self._lock = threading.RLock()
        self._values: Dict[Hashable, RecursionNode] = {}

    def get_or_compute(self, key: Hashable, compute: Callable[[], RecursionNode]) -> RecursionNode:
        with self._lock:
            if key not in self._values:
                self._values[key] = compute()
            return self._values[key]

    def __len__(self) -> int:
        return len(self._values)


def _singleton_node(graph: Graph, fractional: bool) -> RecursionNode:
    cover = Cover(1, "local_partial_lp" if fractional else "local_partial", fractional,
                  (CoverSet((0,), 0, Fraction(1), Fraction(1)),), Fraction(1))
    return RecursionNode(graph, cover, fractional)


def _solve_node(
    graph: Graph,
    fractional: bool,
    remaining: Optional[int],
    memo: MemoTable,
    prune: Optional[bool],
) -> RecursionNode:
    key = (graph.n, graph.adjacency_key(), fractional, remaining)
    return memo.get_or_compute(key, lambda: _compute_node(graph, fractional, remaining, memo, prune))


def _compute_node(
    graph: Graph,
    fractional: bool,
    remaining: Optional[int],
    memo: MemoTable,
    prune: Optional[bool],
) -> RecursionNode:
    if graph.n == 1:
        return _singleton_node(graph, fractional)

    nested: Dict[VertexSet, RecursionNode] = {}

    def ceiling(members: VertexSet, k: int) -> Fraction:
        if len(members) == 1:
            return Fraction(1)
        if len(members) == graph.n or k <= 1 or remaining == 0:
            return Fraction(k + 1)
        sub, _ = graph.induced_subgraph(members)
        child = _solve_node(sub, fractional, None if remaining is None else remaining - 1, memo, prune)
        nested[members] = child
        return child.optimum

    which = "local_partial_lp" if fractional else "local_partial"
    problem = build_program(graph, which, relaxed=fractional, prune=prune, cap=graph.n, caps=ceiling)
    result = solve_lp(problem) if fractional else solve_ilp(problem)
    cover = cover_from_result(graph, problem, result, fractional).validate(graph)
    children = {s.members: nested[s.members] for s in cover.sets if s.members in nested}
    return RecursionNode(graph, cover, fractional, children)


def solve_recursive(
    graph: Graph,
    fractional: bool = True,
    depth_cap: Optional[int] = None,
    cap: Optional[int] = None,
    prune: Optional[bool] = None,
    memo: Optional[MemoTable] = None,
) -> RecursionResult:
    """
    Recursive optimum and the recursion tree of covers.

    Args:
        graph: side-information graph
        fractional: LP form (rho in [0, 1]) or IP form (rho in {0, 1})
        depth_cap: nesting levels below the top (None = unlimited, 0 = plain program)
        cap: maximum n (default Config.RECURSIVE_CAP)
        prune: dominated-set elimination
        memo: shared table, reusable across calls

    Returns:
        RecursionResult
    """
    if graph.n == 0:
        raise InputError("recursive programs need at least one vertex")
    limit = Config.RECURSIVE_CAP if cap is None else cap
    if graph.n > limit:
        raise CapExceededError("n", graph.n, limit)
    if depth_cap is not None and depth_cap < 0:
        raise InputError(f"depth cap must be nonnegative, got {depth_cap}")

    memo = memo if memo is not None else MemoTable()
    root = _solve_node(graph, fractional, depth_cap, memo, prune)
    logger.info("recursive %s optimum %s (%d memoized subproblems)",
                "LP" if fractional else "IP", root.optimum, len(memo))
    return RecursionResult(root.optimum, root, len(memo))
