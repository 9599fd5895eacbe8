"""
Linear index codes: encoding matrix, alignment check, encode and decode.

Column c of G carries one data symbol (row vector) of its owning vertex; the
broadcast is G @ X where X stacks the symbols in column order.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.errors import AlignmentError, FieldError, InputError
from src.fields.field_matrix import FieldMatrix
from src.graphs.side_info_graph import Graph

logger = logging.getLogger(__name__)

SCHEMES = ("main", "fractional", "recursive", "ak", "gic-external")


@dataclass(frozen=True)
class EncodingMatrix:
    """G over GF(p) with ell columns per vertex"""

    p: int
    G: FieldMatrix
    assign: Mapping[int, Tuple[int, ...]]
    ell: int
    delta: int
    scheme: str
    functionals: Mapping[int, FieldMatrix] = field(default_factory=dict, compare=False)
    seed: Optional[int] = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InputError(f"unknown scheme tag {self.scheme!r}")
        if self.G.p != self.p:
            raise FieldError(f"matrix is over GF({self.G.p}), expected GF({self.p})")
        owned = sorted(c for cols in self.assign.values() for c in cols)
        if owned != list(range(self.G.cols)):
            raise InputError("column ownership is not a partition of the columns of G")
        if sorted(self.assign) != list(range(len(self.assign))):
            raise InputError("assignment must cover vertices 0..n-1")
        for v, cols in self.assign.items():
            if len(cols) != self.ell:
                raise InputError(f"vertex {v} owns {len(cols)} columns, expected {self.ell}")

    @property
    def n(self) -> int:
        return len(self.assign)

    @property
    def m_rows(self) -> int:
        return self.G.rows

    @property
    def rate(self) -> Fraction:
        """Broadcast symbols per message symbol"""
        return Fraction(self.m_rows, self.ell)

    def columns_of(self, vertices: Sequence[int]) -> List[int]:
        return [c for v in vertices for c in self.assign[v]]


@dataclass(frozen=True)
class Broadcast:
    symbols: FieldMatrix  # m_rows x width


@dataclass
class VertexAlignment:
    vertex: int
    ok: bool
    failing_columns: List[int] = field(default_factory=list)


@dataclass
class AlignmentReport:
    ok: bool
    vertices: Dict[int, VertexAlignment]
    functionals: Dict[int, FieldMatrix]

    @property
    def failing(self) -> List[int]:
        return [v for v, r in self.vertices.items() if not r.ok]


# ===========================================
# ALIGNMENT
# ===========================================

def vertex_functionals(e: EncodingMatrix, g: Graph, v: int) -> Tuple[Optional[FieldMatrix], List[int]]:
    """
    Decoding rows for vertex v (ell x m_rows) and the owned columns that fail.

    Row r satisfies lambda . u_c = 1 for the r-th owned column c and
    lambda . u_c' = 0 for v's other columns and all columns of its
    open non-neighbors.
    """
    own = list(e.assign[v])
    interfering = e.columns_of(g.open_non_neighbors(v))
    rows, failing = [], []
    for c in own:
        others = [d for d in own if d != c] + interfering
        system = e.G.columns([c] + others).transpose()
        target = FieldMatrix.column(e.p, [1] + [0] * len(others))
        lam = system.solve(target)
        if lam is None:
            failing.append(c)
        else:
            rows.append(lam.to_numpy().ravel())
    if failing:
        return None, failing
    return FieldMatrix(e.p, np.array(rows, dtype=np.int64).reshape(len(own), e.m_rows)), []


def functional_fits(e: EncodingMatrix, g: Graph, v: int, lam: FieldMatrix) -> bool:
    """lam picks out v's own columns and annihilates v's interference under g"""
    if lam.p != e.p or lam.shape != (e.ell, e.m_rows):
        return False
    own = e.G.columns(e.assign[v])
    interfering = e.G.columns(e.columns_of(g.open_non_neighbors(v)))
    return lam @ own == FieldMatrix.identity(e.p, e.ell) and (lam @ interfering).is_zero()


def verify_alignment(e: EncodingMatrix, g: Graph) -> AlignmentReport:
    """Every owned column lies outside the span of the interfering columns"""
    if g.n != e.n:
        raise InputError(f"matrix assigns {e.n} vertices, graph has {g.n}")
    vertices, functionals = {}, {}
    for v in range(g.n):
        lam, failing = vertex_functionals(e, g, v)
        vertices[v] = VertexAlignment(v, lam is not None, failing)
        if lam is not None:
            functionals[v] = lam
    report = AlignmentReport(all(r.ok for r in vertices.values()), vertices, functionals)
    if not report.ok:
        logger.debug("alignment fails at vertices %s", report.failing)
    return report


# ===========================================
# ENCODE / DECODE
# ===========================================

def _as_block(e: EncodingMatrix, value, v: int) -> np.ndarray:
    block = np.array(value.to_numpy() if isinstance(value, FieldMatrix) else value, dtype=np.int64)
    if block.ndim == 1:
        block = block.reshape(e.ell, -1) if block.size % e.ell == 0 and block.size else block.reshape(-1, 1)
    if block.ndim != 2 or block.shape[0] != e.ell:
        raise InputError(f"data block of vertex {v} must have {e.ell} rows, got shape {block.shape}")
    return np.mod(block, e.p)


def encode(e: EncodingMatrix, data: Mapping[int, object]) -> Broadcast:
    """G @ X for per-vertex blocks of shape (ell, width)"""
    if sorted(data) != list(range(e.n)):
        raise InputError("data must be given for every vertex")
    blocks = {v: _as_block(e, data[v], v) for v in range(e.n)}
    widths = {b.shape[1] for b in blocks.values()}
    if len(widths) != 1:
        raise InputError(f"data blocks have different widths: {sorted(widths)}")
    width = widths.pop()
    stacked = np.zeros((e.G.cols, width), dtype=np.int64)
    for v, cols in e.assign.items():
        stacked[list(cols)] = blocks[v]
    return Broadcast(e.G @ FieldMatrix(e.p, stacked))


def decode(e: EncodingMatrix, g: Graph, v: int, bc: Broadcast, side: Mapping[int, object]) -> FieldMatrix:
    """Recover v's block from the broadcast and the blocks of N(v)"""
    if bc.symbols.rows != e.m_rows:
        raise InputError(f"broadcast has {bc.symbols.rows} rows, matrix has {e.m_rows}")
    missing = [u for u in g.neighbors(v) if u not in side]
    if missing:
        raise InputError(f"vertex {v} lacks side information for {sorted(missing)}")

    lam = e.functionals.get(v)
    if lam is None or not functional_fits(e, g, v, lam):
        lam, failing = vertex_functionals(e, g, v)
        if lam is None:
            raise AlignmentError(f"vertex {v} cannot decode: columns {failing} are aligned with interference")

    residual = bc.symbols
    for u in sorted(g.neighbors(v)):
        block = FieldMatrix(e.p, _as_block(e, side[u], u))
        if block.cols != residual.cols:
            raise InputError(f"side block of vertex {u} has width {block.cols}, broadcast has {residual.cols}")
        residual = residual - e.G.columns(e.assign[u]) @ block
    return lam @ residual


def random_data(e: EncodingMatrix, rng, width: int = 1) -> Dict[int, np.ndarray]:
    return {v: np.array([[rng.randrange(e.p) for _ in range(width)] for _ in range(e.ell)], dtype=np.int64)
            for v in range(e.n)}


def round_trip(e: EncodingMatrix, g: Graph, data: Mapping[int, np.ndarray]) -> List[int]:
    """Vertices whose decoded block differs from the original"""
    bc = encode(e, data)
    wrong = []
    for v in range(g.n):
        side = {u: data[u] for u in g.neighbors(v)}
        decoded = decode(e, g, v, bc, side)
        if decoded != FieldMatrix(e.p, _as_block(e, data[v], v)):
            wrong.append(v)
    return wrong
