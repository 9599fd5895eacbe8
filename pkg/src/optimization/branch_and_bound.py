"""
Branch-and-bound for binary integer programs on top of the exact simplex.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from src.errors import LpError
from src.optimization.rational_simplex import LpProblem, LpResult, LpStatus, solve_lp

logger = logging.getLogger(__name__)


@dataclass
class _Node:
    fixed: Dict[int, Fraction]
    depth: int


def _branch_variable(problem: LpProblem, x: List[Fraction]) -> Optional[int]:
    """Most fractional binary (closest to 1/2), ties to the smallest index"""
    best, best_gap = None, None
    for j, is_binary in enumerate(problem.binary):
        if not is_binary or x[j].denominator == 1:
            continue
        gap = abs(x[j] - Fraction(1, 2))
        if best_gap is None or gap < best_gap:
            best, best_gap = j, gap
    return best


def solve_ilp(problem: LpProblem, node_limit: Optional[int] = None) -> LpResult:
    """
    Exact optimum with every binary variable in {0, 1}.

    Depth-first search, exploring the x_j = 1 branch first. When the problem
    declares an integral objective, LP bounds are rounded up before pruning.
    """
    if not any(problem.binary):
        return solve_lp(problem)
    for j, is_binary in enumerate(problem.binary):
        if is_binary and (problem.lower[j] < 0 or problem.upper[j] is None or problem.upper[j] > 1):
            raise LpError(f"binary variable {problem.variables[j]} must be bounded by [0, 1]")

    incumbent: Optional[LpResult] = None
    stack = [_Node({}, 0)]
    nodes = 0
    pivots = 0

    while stack:
        node = stack.pop()
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise LpError(f"branch-and-bound node limit {node_limit} reached on {problem.name!r}")

        relaxation = solve_lp(problem.with_bounds(node.fixed))
        pivots += relaxation.pivots
        if relaxation.status == LpStatus.INFEASIBLE:
            continue
        if relaxation.status == LpStatus.UNBOUNDED:
            # binaries are bounded, so only continuous variables can be unbounded
            return LpResult(LpStatus.UNBOUNDED, pivots=pivots)

        bound = relaxation.optimum
        if problem.integral_objective:
            bound = Fraction(math.ceil(bound))
        if incumbent is not None and bound >= incumbent.optimum:
            continue

        j = _branch_variable(problem, relaxation.assignment)
        if j is None:
            incumbent = LpResult(LpStatus.OPTIMAL, relaxation.optimum, relaxation.assignment)
            logger.debug("incumbent %s at node %d (%s)", incumbent.optimum, nodes, problem.name)
            continue

        stack.append(_Node({**node.fixed, j: Fraction(0)}, node.depth + 1))
        stack.append(_Node({**node.fixed, j: Fraction(1)}, node.depth + 1))

    logger.info("branch-and-bound on %r: %d nodes", problem.name, nodes)
    if incumbent is None:
        return LpResult(LpStatus.INFEASIBLE, pivots=pivots)
    incumbent.pivots = pivots
    return incumbent
