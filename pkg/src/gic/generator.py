"""
Random (k, n)-GIC instances and invalid mutants of them.

Inner vertices are 0..n-1; every tree edge is realized as a P-path through
fresh non-inner vertices. A new path may instead branch off a non-inner
vertex already private to the current tree, or join the tail of an
existing path toward the same target (the joined vertex brings its whole
suffix into the new tree).
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, Optional, Set

from config import Config
from src.errors import GicStructureError, InputError
from src.gic.structure import GicStructure, check_gic
from src.graphs.side_info_graph import Graph

logger = logging.getLogger(__name__)


class _Builder:
    def __init__(self, n: int):
        self.n = n
        self.out: Dict[int, Set[int]] = {v: set() for v in range(n)}
        self.trees: Dict[int, Dict[int, int]] = {v: {} for v in range(n)}
        self.owners: Dict[int, Set[int]] = {}  # non-inner vertex -> roots whose tree holds it

    def fresh(self) -> int:
        v = len(self.out)
        self.out[v] = set()
        self.owners[v] = set()
        return v

    def add(self, root: int, parent: int, child: int):
        self.out[parent].add(child)
        self.trees[root][child] = parent
        if child >= self.n:
            self.owners[child].add(root)

    def chain_target(self, v: int) -> Optional[int]:
        """Inner vertex at the end of v's suffix, or None when the suffix branches"""
        while v >= self.n:
            if len(self.out[v]) != 1:
                return None
            (v,) = self.out[v]
        return v

    def path(self, root: int, start: int, target: int, length: int):
        """start -> (length - 1 fresh vertices) -> target, all in T_root"""
        prev = start
        for _ in range(length - 1):
            nxt = self.fresh()
            self.add(root, prev, nxt)
            prev = nxt
        self.add(root, prev, target)

    def join(self, root: int, start: int, joint: int, prefix: int):
        """start -> (prefix fresh vertices) -> joint, then joint's suffix copied into T_root"""
        prev = start
        for _ in range(prefix):
            nxt = self.fresh()
            self.add(root, prev, nxt)
            prev = nxt
        self.add(root, prev, joint)
        v = joint
        while v >= self.n:
            (child,) = self.out[v]
            self.add(root, v, child)
            v = child


def generate_gic(
    n: int,
    k: int,
    max_path_len: int = 1,
    seed: Optional[int] = None,
    share_prob: float = 0.3,
    branch_prob: float = 0.3,
) -> GicStructure:
    """
    Valid (k, n)-GIC with inner vertices 0..n-1.

    Args:
        n: number of inner vertices (>= 2)
        k: slack, 0 <= k <= n - 2; every tree reaches exactly n - k - 1 inner leaves
        max_path_len: longest P-path (edges); 1 gives direct inner-to-inner edges
        seed: RNG seed (default Config.DEFAULT_SEED)
        share_prob: chance a new path joins an existing suffix toward its target
        branch_prob: chance a new path starts from a private non-inner vertex of the tree

    Returns:
        GicStructure (always passes check_gic)
    """
    if n < 2:
        raise InputError(f"need at least 2 inner vertices, got {n}")
    if not 0 <= k <= n - 2:
        raise InputError(f"k must lie in [0, {n - 2}], got {k}")
    if max_path_len < 1:
        raise InputError(f"max path length must be positive, got {max_path_len}")

    seed = Config.DEFAULT_SEED if seed is None else seed
    rng = random.Random(seed)
    b = _Builder(n)

    for root in range(n):
        targets = sorted(rng.sample([v for v in range(n) if v != root], n - k - 1))
        for target in targets:
            length = rng.randint(1, max_path_len)
            joints = [
                v for v, owners in b.owners.items()
                if owners and root not in owners and b.chain_target(v) == target
            ]
            private = [v for v, owners in b.owners.items() if owners == {root}]
            roll = rng.random()
            if joints and roll < share_prob:
                b.join(root, root, rng.choice(joints), rng.randint(0, max_path_len - 1))
            elif private and roll < share_prob + branch_prob:
                b.path(root, rng.choice(private), target, length)
            else:
                b.path(root, root, target, length)

    total = len(b.out)
    graph = Graph(total, tuple(frozenset(b.out[v]) for v in range(total)))
    s = GicStructure(graph, tuple(range(n)), b.trees, k)
    report = check_gic(s)
    if not report.valid:
        raise GicStructureError(f"generator produced an invalid structure: {report.violations[0].message}")
    logger.debug("generated (%d,%d)-GIC with %d non-inner vertices (seed %d)", k, n, total - n, seed)
    return s


# ===========================================
# MUTATIONS
# ===========================================

@dataclass
class GicMutation:
    structure: GicStructure
    kind: str  # edge_deletion | i_cycle
    detail: str


def _delete_tree_edge(s: GicStructure, rng: random.Random) -> GicMutation:
    roots = [r for r in s.inner if s.trees[r]]
    if not roots:
        raise InputError("structure has no tree edges to delete")
    root = rng.choice(roots)
    child = rng.choice(sorted(s.trees[root]))
    parent = s.trees[root][child]
    trees = {r: dict(t) for r, t in s.trees.items()}
    del trees[root][child]
    mutant = GicStructure(s.graph, s.inner, trees, s.k)
    return GicMutation(mutant, "edge_deletion", f"removed {parent}->{child} from T_{root}")


def _insert_i_cycle(s: GicStructure, rng: random.Random) -> GicMutation:
    root = rng.choice([r for r in s.inner if any(not s.is_inner(c) for c in s.trees[r])])
    a = rng.choice(sorted(c for c in s.trees[root] if not s.is_inner(c)))
    graph = Graph.from_edges(s.graph.n, s.graph.edges() + [(a, root)], s.graph.labels)
    mutant = GicStructure(graph, s.inner, s.trees, s.k)
    return GicMutation(mutant, "i_cycle", f"added {a}->{root}")


def mutate_gic(s: GicStructure, seed: Optional[int] = None) -> GicMutation:
    """
    Invalid variant: drop one tree edge, or add a non-inner -> root edge
    that closes a cycle through a single inner vertex. Structures without
    non-inner vertices always get the deletion.
    """
    rng = random.Random(Config.DEFAULT_SEED if seed is None else seed)
    has_non_inner = any(not s.is_inner(c) for t in s.trees.values() for c in t)
    if has_non_inner and rng.random() < 0.5:
        mutation = _insert_i_cycle(s, rng)
    else:
        mutation = _delete_tree_edge(s, rng)
    logger.debug("mutation: %s", mutation.detail)
    return mutation
