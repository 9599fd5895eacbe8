"""
Directed side-information graphs.
An edge u -> v means user u already holds user v's message.
"""

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from src.errors import InputError

logger = logging.getLogger(__name__)

VertexSet = Tuple[int, ...]


def vertex_set(members: Iterable[int]) -> VertexSet:
    """Canonical (sorted, duplicate-free) vertex set"""
    return tuple(sorted(set(members)))


@dataclass(frozen=True)
class Graph:
    """Immutable digraph on vertices 0..n-1"""

    n: int
    out_adj: Tuple[FrozenSet[int], ...]
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"vertex count must be nonnegative, got {self.n}")
        if len(self.out_adj) != self.n:
            raise InputError(f"expected {self.n} adjacency sets, got {len(self.out_adj)}")
        for v, nbrs in enumerate(self.out_adj):
            if v in nbrs:
                raise InputError(f"self-loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise InputError(f"neighbor {u} of vertex {v} outside [0, {self.n})")
        if self.labels is not None and len(self.labels) != self.n:
            raise InputError("label table does not match vertex count")

    # ==== CONSTRUCTION ====

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], labels=None) -> "Graph":
        adj: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) outside [0, {n})")
            adj[u].add(v)
        return cls(n, tuple(frozenset(a) for a in adj), labels)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n, [])

    @classmethod
    def complete(cls, n: int) -> "Graph":
        """Bidirectional clique"""
        return cls.from_edges(n, [(u, v) for u in range(n) for v in range(n) if u != v])

    @classmethod
    def directed_cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(v, (v + 1) % n) for v in range(n)])

    @classmethod
    def bidirectional_cycle(cls, n: int) -> "Graph":
        edges = [(v, (v + 1) % n) for v in range(n)]
        return cls.from_edges(n, edges + [(b, a) for a, b in edges])

    @classmethod
    def random(cls, n: int, p: float, seed: int) -> "Graph":
        """Each ordered pair is an edge independently with probability p"""
        rng = random.Random(seed)
        edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
        return cls.from_edges(n, edges)

    # ==== QUERIES ====

    @property
    def vertices(self) -> VertexSet:
        return tuple(range(self.n))

    def neighbors(self, v: int) -> FrozenSet[int]:
        """N(v): out-neighbors of v"""
        return self.out_adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((u, v) for u in range(self.n) for v in self.out_adj[u])

    def closed_non_neighbors(self, v: int) -> VertexSet:
        """V minus N(v); contains v itself"""
        self._check_vertex(v)
        return tuple(u for u in range(self.n) if u not in self.out_adj[v])

    def open_non_neighbors(self, v: int) -> VertexSet:
        """V minus N(v) minus {v}: the vertices interfering at v"""
        self._check_vertex(v)
        return tuple(u for u in range(self.n) if u != v and u not in self.out_adj[v])

    def induced_subgraph(self, s: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """G|_s relabeled 0..|s|-1 in sorted order, plus the map old label -> new label"""
        members = vertex_set(s)
        for v in members:
            self._check_vertex(v)
        relabel = {v: i for i, v in enumerate(members)}
        adj = tuple(
            frozenset(relabel[u] for u in self.out_adj[v] if u in relabel)
            for v in members
        )
        labels = tuple(self.labels[v] for v in members) if self.labels else None
        return Graph(len(members), adj, labels), relabel

    def out_degree_within(self, v: int, s: FrozenSet[int]) -> int:
        return len(self.out_adj[v] & s)

    def partial_clique_degree(self, s: Iterable[int]) -> int:
        """k with G|_s a k-partial clique: (|s| - 1) - min out-degree inside s"""
        members = frozenset(s)
        if not members:
            raise InputError("partial clique degree of an empty set")
        return len(members) - 1 - min(self.out_degree_within(v, members) for v in members)

    def is_clique(self, s: Iterable[int]) -> bool:
        """Every ordered pair inside s is an edge"""
        members = frozenset(s)
        if not members:
            raise InputError("clique test on an empty set")
        return all(members - {v} <= self.out_adj[v] for v in members)

    def adjacency_key(self) -> Tuple[int, ...]:
        """Adjacency bitmasks; equal keys mean identical labeled graphs"""
        return tuple(sum(1 << u for u in nbrs) for nbrs in self.out_adj)

    def is_acyclic(self, s: Optional[Iterable[int]] = None) -> bool:
        """True iff the subgraph induced by s (default: all of V) has no directed cycle"""
        graph = self.to_networkx()
        if s is not None:
            graph = graph.subgraph(s)
        return nx.is_directed_acyclic_graph(graph)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    def _check_vertex(self, v: int):
        if not 0 <= v < self.n:
            raise InputError(f"vertex {v} outside [0, {self.n})")


def nonempty_subsets(n: int) -> Iterator[VertexSet]:
    """All nonempty subsets of 0..n-1, by size then lexicographically"""
    for size in range(1, n + 1):
        yield from combinations(range(n), size)


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labeled digraph on n vertices (2^(n(n-1)) of them)"""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [pair for i, pair in enumerate(pairs) if mask >> i & 1])


def canonical_order(sets: Sequence[VertexSet]) -> List[VertexSet]:
    """Lexicographic order on sorted member tuples"""
    return sorted(vertex_set(s) for s in sets)
