"""
(k, n)-GIC structures: digraph D_n, inner vertex set V_I, and one rooted
out-tree per inner vertex.

File format (graph-file section first, then the structure):

    5
    0 2
    2 1
    ...
    k: 1
    inner: 0 1
    tree 0: 2:0 1:2
    tree 1: 0:1

"tree i:" lists child:parent pairs of T_i. The k line is optional.
"""

import logging
from dataclasses import dataclass, field
from itertools import islice
from typing import Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

import networkx as nx

from src.errors import GicParseError, GicStructureError, GraphParseError, InputError
from src.graphs.graph_io import is_index, parse_graph, serialize_graph, strip_comment
from src.graphs.side_info_graph import Graph, VertexSet, vertex_set

logger = logging.getLogger(__name__)

Tree = Mapping[int, int]  # child -> parent


@dataclass(frozen=True)
class GicStructure:
    graph: Graph
    inner: VertexSet
    trees: Mapping[int, Tree]
    k: int

    def __post_init__(self):
        if not self.inner:
            raise InputError("a GIC structure needs at least one inner vertex")
        for v in self.inner:
            if not 0 <= v < self.graph.n:
                raise InputError(f"inner vertex {v} outside [0, {self.graph.n})")
        if sorted(self.trees) != sorted(self.inner):
            raise InputError("exactly one tree per inner vertex is required")
        if not 0 <= self.k <= max(len(self.inner) - 1, 0):
            raise InputError(f"k={self.k} outside [0, {len(self.inner) - 1}]")

    @classmethod
    def with_default_k(cls, graph: Graph, inner, trees: Mapping[int, Tree]) -> "GicStructure":
        """k = n - 1 - min_i |inner leaves of T_i|"""
        inner = vertex_set(inner)
        fewest = min(sum(1 for c in trees[i] if c in inner) for i in inner)
        return cls(graph, inner, trees, max(len(inner) - 1 - fewest, 0))

    @property
    def n(self) -> int:
        return len(self.inner)

    @property
    def inner_set(self) -> FrozenSet[int]:
        return frozenset(self.inner)

    @property
    def non_inner(self) -> VertexSet:
        inner = self.inner_set
        return tuple(v for v in range(self.graph.n) if v not in inner)

    def is_inner(self, v: int) -> bool:
        return v in self.inner_set

    def tree_edges(self, root: int) -> List[Tuple[int, int]]:
        return sorted((parent, child) for child, parent in self.trees[root].items())

    def children(self, root: int, v: int) -> VertexSet:
        return tuple(sorted(c for c, parent in self.trees[root].items() if parent == v))

    def inner_leaves(self, root: int) -> VertexSet:
        inner = self.inner_set
        return tuple(sorted(c for c in self.trees[root] if c in inner))

    def descendants(self, root: int, v: int) -> Set[int]:
        """Vertices strictly below v in T_root"""
        below, frontier = set(), [v]
        while frontier:
            for c in self.children(root, frontier.pop()):
                if c not in below:
                    below.add(c)
                    frontier.append(c)
        return below

    def trees_containing(self, v: int) -> List[int]:
        return [i for i in self.inner if v in self.trees[i]]


# ===========================================
# VALIDITY CHECK
# ===========================================

@dataclass
class GicViolation:
    condition: str  # tree | leaves | union | coincidence | i_cycle | non_inner_cycle | p_path
    message: str
    witness: List = field(default_factory=list)


@dataclass
class GicReport:
    violations: List[GicViolation]

    @property
    def valid(self) -> bool:
        return not self.violations

    def conditions(self) -> Set[str]:
        return {v.condition for v in self.violations}


def _check_tree(s: GicStructure, root: int) -> List[GicViolation]:
    tree = s.trees[root]
    found = []
    if root in tree:
        found.append(GicViolation("tree", f"root {root} has a parent in its own tree", [root]))
    for child, parent in tree.items():
        if not s.graph.has_edge(parent, child):
            found.append(GicViolation("tree", f"T_{root} edge {parent}->{child} is not in D_n", [parent, child]))
    for child in tree:
        seen, v = {child}, child
        while v in tree:
            v = tree[v]
            if v in seen:
                found.append(GicViolation("tree", f"T_{root} has a parent cycle through {child}", sorted(seen)))
                break
            seen.add(v)
        else:
            if v != root:
                found.append(GicViolation("tree", f"T_{root} vertex {child} does not reach the root", [child, v]))
    for child in tree:
        has_children = bool(s.children(root, child))
        if s.is_inner(child) and has_children:
            found.append(GicViolation("tree", f"inner vertex {child} is not a leaf of T_{root}", [child]))
        if not s.is_inner(child) and not has_children:
            found.append(GicViolation("tree", f"non-inner vertex {child} is a leaf of T_{root}", [child]))
    return found


def _i_cycles(s: GicStructure) -> List[GicViolation]:
    digraph = s.graph.to_networkx()
    non_inner = set(s.non_inner)
    found = []
    for vi in s.inner:
        sub = digraph.subgraph(non_inner | {vi})
        reach = nx.descendants(sub, vi)
        back = [u for u in sub.predecessors(vi) if u in reach or u == vi]
        if back:
            path = nx.shortest_path(sub, vi, back[0])
            found.append(GicViolation("i_cycle", f"cycle through inner vertex {vi} only", path + [vi]))
    return found


def _coincidence(s: GicStructure) -> List[GicViolation]:
    """A non-inner vertex of T_i has all of its out-neighbors as children in T_i"""
    found = []
    for root in s.inner:
        for l in sorted(s.trees[root]):
            if s.is_inner(l):
                continue
            missing = sorted(s.graph.neighbors(l) - set(s.children(root, l)))
            if missing:
                found.append(GicViolation(
                    "coincidence", f"out-neighbors {missing} of {l} are not its children in T_{root}", [root, l]
                ))
    return found


def _non_inner_cycle(s: GicStructure) -> List[GicViolation]:
    sub = s.graph.to_networkx().subgraph(s.non_inner)
    try:
        cycle = nx.find_cycle(sub)
    except nx.NetworkXNoCycle:
        return []
    return [GicViolation("non_inner_cycle", "cycle among non-inner vertices", [u for u, _ in cycle])]


def _p_paths(s: GicStructure) -> List[GicViolation]:
    digraph = s.graph.to_networkx()
    non_inner = set(s.non_inner)
    found = []
    for vi in s.inner:
        for vj in s.inner:
            if vi == vj:
                continue
            sub = digraph.subgraph(non_inner | {vi, vj})
            paths = list(islice(nx.all_simple_paths(sub, vi, vj), 2))
            if len(paths) > 1:
                found.append(GicViolation("p_path", f"two P-paths from {vi} to {vj}", paths))
    return found


def check_gic(s: GicStructure) -> GicReport:
    """Every structural condition, each violation with a witness"""
    violations: List[GicViolation] = []
    for root in s.inner:
        violations.extend(_check_tree(s, root))
        leaves = s.inner_leaves(root)
        if len(leaves) < s.n - s.k - 1:
            violations.append(GicViolation(
                "leaves", f"T_{root} reaches {len(leaves)} inner vertices, needs {s.n - s.k - 1}", [root]
            ))

    union = {edge for root in s.inner for edge in s.tree_edges(root)}
    extra = sorted(set(s.graph.edges()) - union)
    if extra:
        violations.append(GicViolation("union", "D_n has edges outside every tree", extra))

    violations.extend(_coincidence(s))
    violations.extend(_i_cycles(s))
    violations.extend(_non_inner_cycle(s))
    violations.extend(_p_paths(s))
    if violations:
        logger.debug("GIC check: %d violation(s): %s", len(violations), sorted({v.condition for v in violations}))
    return GicReport(violations)


def subtree_coincidence_check(s: GicStructure) -> bool:
    """
    A non-inner vertex shared by two trees has the same non-inner subtree,
    the same inner leaves below it and the same children in both.
    """
    for v in s.non_inner:
        views = []
        for root in s.trees_containing(v):
            below = s.descendants(root, v)
            views.append((
                frozenset(u for u in below if not s.is_inner(u)),
                frozenset(u for u in below if s.is_inner(u)),
                s.children(root, v),
            ))
        if len(set(views)) > 1:
            logger.debug("subtrees at non-inner vertex %d differ between trees", v)
            return False
    return True


def require_valid(s: GicStructure) -> GicStructure:
    report = check_gic(s)
    if not report.valid:
        first = report.violations[0]
        raise GicStructureError(f"invalid GIC structure ({first.condition}): {first.message}")
    return s


# ===========================================
# FILE FORMAT
# ===========================================

def _int(token: str, line_no: int) -> int:
    if not is_index(token):
        raise GicParseError(f"expected a vertex index, got {token!r}", line_no)
    return int(token)


def parse_gic(text: str) -> GicStructure:
    graph_lines: List[str] = []
    k: Optional[int] = None
    inner: Optional[VertexSet] = None
    trees: Dict[int, Dict[int, int]] = {}

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = strip_comment(raw)
        if line.startswith("k:"):
            k = _int(line[2:].strip(), line_no)
        elif line.startswith("inner:"):
            inner = tuple(_int(t, line_no) for t in line[6:].split())
        elif line.startswith("tree"):
            head, _, body = line.partition(":")
            parts = head.split()
            if len(parts) != 2:
                raise GicParseError(f"malformed tree line {line!r}", line_no)
            root = _int(parts[1], line_no)
            if root in trees:
                raise GicParseError(f"duplicate tree for inner vertex {root}", line_no)
            tree: Dict[int, int] = {}
            for pair in body.split():
                child, sep, parent = pair.partition(":")
                if not sep:
                    raise GicParseError(f"expected child:parent, got {pair!r}", line_no)
                child, parent = _int(child, line_no), _int(parent, line_no)
                if child in tree:
                    raise GicParseError(f"vertex {child} has two parents in tree {root}", line_no)
                tree[child] = parent
            trees[root] = tree
        else:
            graph_lines.append(raw)
            continue
        graph_lines.append("")  # keep line numbers aligned

    try:
        graph = parse_graph("\n".join(graph_lines))
    except GraphParseError as exc:
        message = str(exc) if exc.line_no is None else str(exc).split(": ", 1)[1]
        raise GicParseError(message, exc.line_no) from exc
    if inner is None:
        raise GicParseError("missing 'inner:' line")
    if len(set(inner)) != len(inner):
        raise GicParseError("inner vertices repeat")
    for root in inner:
        trees.setdefault(root, {})
    try:
        if k is None:
            return GicStructure.with_default_k(graph, inner, trees)
        return GicStructure(graph, vertex_set(inner), trees, k)
    except InputError as exc:
        raise GicParseError(str(exc)) from exc


def serialize_gic(s: GicStructure) -> str:
    lines = [serialize_graph(s.graph).rstrip("\n"), f"k: {s.k}", "inner: " + " ".join(map(str, s.inner))]
    for root in s.inner:
        pairs = " ".join(f"{c}:{p}" for c, p in sorted(s.trees[root].items()))
        lines.append(f"tree {root}: {pairs}".rstrip())
    return "\n".join(lines) + "\n"


def read_gic_file(path) -> GicStructure:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_gic(handle.read())
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read GIC file {path}: {exc}") from exc
